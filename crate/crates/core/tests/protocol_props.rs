use std::collections::BTreeSet;

use proptest::prelude::*;

use ndisc::baseline::simulate_baseline;
use ndisc::channel::ChannelModel;
use ndisc::protocol::{run_discovery, Action, DiscoverySim, ProtocolConfig, Topology};
use ndisc::receiver::ReceiverConfig;
use ndisc::seed::stream;
use ndisc::{DiscoveryCode, Tnid};

fn setup(d: u64) -> (DiscoveryCode, ReceiverConfig) {
    let code = DiscoveryCode::with_params(d, 8, 1).unwrap();
    let rx = ReceiverConfig::for_code(&code);
    (code, rx)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn noiseless_runs_find_no_false_neighbors(nodes in 2usize..25, seed in any::<u64>()) {
        let (code, rx) = setup(521);
        let topo = Topology::random(nodes, 400.0, 8.0, &mut stream(seed, "topo", 0));
        let cfg = ProtocolConfig { max_slots: 300, ..ProtocolConfig::default() };
        let out = run_discovery(&topo, &cfg, &code, &ChannelModel::default(), &rx, &mut stream(seed, "run", 0)).unwrap();
        for i in 0..nodes {
            for j in out.times.discovered[i].keys() {
                prop_assert!(*j != i && topo.is_adjacent(i, *j));
            }
            if let Some(own) = out.final_tnids[i] {
                prop_assert!(!out.tables[i].contains_key(&own));
            }
        }
        let b = simulate_baseline(&topo, cfg.p, 300, &mut stream(seed, "base", 0));
        for i in 0..nodes {
            prop_assert!(b.discovered[i].keys().all(|j| topo.is_adjacent(i, *j)));
        }
    }

    #[test]
    fn distinct_signals_all_get_through(nodes in 2usize..15, seed in any::<u64>()) {
        let (code, rx) = setup(521);
        let topo = Topology::clique(nodes);
        let cfg = ProtocolConfig { p: 0.5, ..ProtocolConfig::default() };
        let mut sim = DiscoverySim::new(&topo, cfg, code, ChannelModel::default(), rx, &mut stream(seed, "sim", 0)).unwrap();
        for i in 0..nodes {
            sim.force_tnid(i, Tnid(10 * i as u64 + 3));
        }
        for _ in 0..20 {
            let r = sim.step();
            let on_air: BTreeSet<Tnid> = r.actions.iter().filter_map(Action::on_air).collect();
            for (i, dec) in r.decoded.iter().enumerate() {
                if let Some(dec) = dec {
                    let got: BTreeSet<Tnid> = dec.iter().map(|x| x.tnid).collect();
                    prop_assert_eq!(&got, &on_air, "listener {}", i);
                }
            }
        }
    }

    #[test]
    fn identical_inputs_give_identical_runs(nodes in 2usize..15, seed in any::<u64>()) {
        let (code, rx) = setup(521);
        let topo = Topology::random(nodes, 200.0, 8.0, &mut stream(seed, "topo", 0));
        let cfg = ProtocolConfig { max_slots: 200, ..ProtocolConfig::default() };
        let run = || run_discovery(&topo, &cfg, &code, &ChannelModel::default(), &rx, &mut stream(seed, "run", 0)).unwrap();
        prop_assert_eq!(run(), run());
    }
}

#[test]
fn crowded_clique_spreads_over_distinct_tnids() {
    // Everyone hears everyone, so collisions surface as own-TNID hits. The
    // default jam margin false-alarms often enough over thousands of slots
    // to keep a dense clique churning; it is raised out of the way here.
    let (code, rx) = setup(17);
    let topo = Topology::clique(10);
    let cfg = ProtocolConfig {
        candidates: 8,
        jam_margin: Some(0.3),
        max_slots: 3000,
        stop_when_complete: false,
        ..ProtocolConfig::default()
    };
    let runs = 50;
    let mut distinct = 0;
    for seed in 0..runs {
        let out = run_discovery(
            &topo,
            &cfg,
            &code,
            &ChannelModel::default(),
            &rx,
            &mut stream(seed, "clique", 0),
        )
        .unwrap();
        let ids: BTreeSet<Tnid> = out.final_tnids.iter().flatten().copied().collect();
        if ids.len() == 10 {
            distinct += 1;
        }
    }
    assert!(
        distinct >= 49,
        "{distinct}/{runs} runs ended on distinct TNIDs"
    );
}

#[test]
fn noisy_runs_are_reproducible() {
    let (code, mut rx) = setup(17);
    rx.tau = 6;
    let topo = Topology::line(4, 1.0, 1.5);
    let cfg = ProtocolConfig {
        candidates: 8,
        max_slots: 100,
        ..ProtocolConfig::default()
    };
    let ch = ChannelModel {
        noise_var: ndisc::channel::snr_db_to_noise(6.0, 17),
        ..ChannelModel::default()
    };
    let a = run_discovery(&topo, &cfg, &code, &ch, &rx, &mut stream(5, "noisy", 0)).unwrap();
    let b = run_discovery(&topo, &cfg, &code, &ch, &rx, &mut stream(5, "noisy", 0)).unwrap();
    assert_eq!(a, b);
}
