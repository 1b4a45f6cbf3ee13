use rand::Rng;

/// Node placement and the derived unit-disk connectivity.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    positions: Vec<(f64, f64)>,
    range: f64,
    adjacency: Vec<Vec<usize>>,
}

impl Topology {
    /// Nodes within `range` of each other are neighbors.
    pub fn from_positions(positions: Vec<(f64, f64)>, range: f64) -> Self {
        let n = positions.len();
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (
                    positions[i].0 - positions[j].0,
                    positions[i].1 - positions[j].1,
                );
                if (dx * dx + dy * dy).sqrt() <= range {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        Topology {
            positions,
            range,
            adjacency,
        }
    }

    /// `nodes` points dropped uniformly over a square of the given area.
    pub fn random<R: Rng + ?Sized>(nodes: usize, area: f64, range: f64, rng: &mut R) -> Self {
        let side = area.sqrt();
        let positions = (0..nodes)
            .map(|_| (rng.random_range(0.0..side), rng.random_range(0.0..side)))
            .collect();
        Self::from_positions(positions, range)
    }

    /// Evenly spaced points on a line; with `spacing <= range < 2*spacing`
    /// only consecutive nodes hear each other.
    pub fn line(nodes: usize, spacing: f64, range: f64) -> Self {
        Self::from_positions(
            (0..nodes).map(|i| (i as f64 * spacing, 0.0)).collect(),
            range,
        )
    }

    /// Every node hears every other node.
    pub fn clique(nodes: usize) -> Self {
        let positions = (0..nodes)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / nodes.max(1) as f64;
                (a.cos(), a.sin())
            })
            .collect();
        Self::from_positions(positions, 2.5)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn position(&self, i: usize) -> (f64, f64) {
        self.positions[i]
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn is_adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(&j)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (self.positions[i], self.positions[j]);
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    }

    pub fn mean_degree(&self) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        self.adjacency.iter().map(Vec::len).sum::<usize>() as f64 / self.len() as f64
    }
}

/// Probability that two points dropped uniformly in a square of the given
/// area lie within `range` of each other (valid for `range <= side`).
pub fn link_probability(area: f64, range: f64) -> f64 {
    let s = range / area.sqrt();
    assert!(s <= 1.0, "range exceeds the square side");
    std::f64::consts::PI * s * s - 8.0 / 3.0 * s.powi(3) + 0.5 * s.powi(4)
}

/// Node count whose uniform drop has the requested expected degree.
pub fn nodes_for_mean_degree(mean_degree: f64, area: f64, range: f64) -> usize {
    (mean_degree / link_probability(area, range) + 1.0).round() as usize
}
