//! TNID <-> discovery-signal transforms.
//!
//! A TNID is written as `k` base-`d` digits, placed after a reserved zero
//! coordinate and run through the Galois Fourier transform of length `n`.
//! Each output coordinate names the subcarrier that carries the tone in the
//! corresponding OFDM symbol. A constant subcarrier shift `δ` shows up only
//! in the reserved coordinate of the inverse transform, which is how offsets
//! are detected and removed.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::gfield::{Elem, FieldError, FieldParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("message {m} out of range (pool size {pool})")]
    OutOfRange { m: u64, pool: u64 },
    #[error("k = {k} too large for codeword length n = {n} (need 1 <= k <= n - 1)")]
    KTooLarge { k: usize, n: usize },
    #[error("message pool d^k does not fit in 64 bits")]
    PoolOverflow,
    #[error("expected {expected} symbols, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("symbol value {0} is not a field element")]
    SymbolRange(u64),
    #[error("acceptance threshold {tau} below k = {k}")]
    ThresholdTooLow { tau: usize, k: usize },
    #[error("offset search width {delta_max} must be below d = {d}")]
    OffsetRange { delta_max: u32, d: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Temporary node identifier; one-to-one with a discovery channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tnid(pub u64);

impl fmt::Display for Tnid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Base-`d` digits `u_1..u_k` of a message, least significant first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfoSymbols(pub Vec<Elem>);

/// Tone subcarrier index for each of the `n` OFDM symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword(pub Vec<Elem>);

impl Codeword {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Every index moved by `delta` subcarriers (mod d).
    pub fn shifted(&self, field: &FieldParams, delta: i64) -> Codeword {
        let s = field.reduce(delta);
        Codeword(self.0.iter().map(|&c| field.add(c, s)).collect())
    }
}

/// Per-symbol sets of detected subcarrier indices. An empty set marks an
/// erased symbol.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DetectedTones {
    symbols: Vec<Vec<Elem>>,
}

impl DetectedTones {
    /// Sorts and deduplicates each symbol's set.
    pub fn new(mut symbols: Vec<Vec<Elem>>) -> Self {
        for s in &mut symbols {
            s.sort_unstable();
            s.dedup();
        }
        DetectedTones { symbols }
    }

    /// `n` erased symbols.
    pub fn empty(n: usize) -> Self {
        DetectedTones {
            symbols: vec![Vec::new(); n],
        }
    }

    /// Perfect detection of a set of codewords.
    pub fn from_codewords<'a, I>(n: usize, codewords: I) -> Self
    where
        I: IntoIterator<Item = &'a Codeword>,
    {
        let mut symbols = vec![Vec::new(); n];
        for c in codewords {
            for (s, &x) in symbols.iter_mut().zip(&c.0) {
                s.push(x);
            }
        }
        Self::new(symbols)
    }

    pub fn symbols(&self) -> &[Vec<Elem>] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    #[inline]
    pub fn contains(&self, symbol: usize, tone: Elem) -> bool {
        self.symbols[symbol].binary_search(&tone).is_ok()
    }

    pub fn shifted(&self, field: &FieldParams, delta: i64) -> DetectedTones {
        let s = field.reduce(delta);
        DetectedTones::new(
            self.symbols
                .iter()
                .map(|set| set.iter().map(|&x| field.add(x, s)).collect())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeResult {
    pub tnid: Tnid,
    /// Symbols in which the candidate's tone was detected.
    pub matches: usize,
    /// Subcarrier offset under which the candidate was found.
    pub offset: i64,
}

/// `k <= ceil(n / d)`: `d` superposed signals separate without ambiguity.
pub fn capacity_ok(n: usize, k: usize, d: usize) -> bool {
    assert!(d >= 1, "at least one signal");
    k <= n.div_ceil(d)
}

/// `(t, rho)`: correctable symbol errors and erasures of an `(n, k)` code.
pub fn correction_capability(n: usize, k: usize) -> (usize, usize) {
    ((n - k) / 2, n - k)
}

/// An `(n, k)` GFT/Reed-Solomon discovery code over a prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscoveryCode {
    field: FieldParams,
    k: usize,
    pool: u64,
}

impl DiscoveryCode {
    pub fn new(field: FieldParams, k: usize) -> Result<Self, CodecError> {
        let n = field.n();
        if k == 0 || k >= n {
            return Err(CodecError::KTooLarge { k, n });
        }
        let pool = (field.d() as u64)
            .checked_pow(k as u32)
            .ok_or(CodecError::PoolOverflow)?;
        Ok(DiscoveryCode { field, k, pool })
    }

    /// Convenience constructor from raw `(d, n, k)`.
    pub fn with_params(d: u64, n: u64, k: usize) -> Result<Self, CodecError> {
        Self::new(FieldParams::new(d, n)?, k)
    }

    pub fn field(&self) -> &FieldParams {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.field.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of distinct TNIDs, `d^k`.
    pub fn pool_size(&self) -> u64 {
        self.pool
    }

    /// Default acceptance threshold `k + floor((n - k) / 2)`.
    pub fn default_threshold(&self) -> usize {
        self.k + correction_capability(self.n(), self.k).0
    }

    pub fn message_to_symbols(&self, m: Tnid) -> Result<InfoSymbols, CodecError> {
        if m.0 >= self.pool {
            return Err(CodecError::OutOfRange {
                m: m.0,
                pool: self.pool,
            });
        }
        let d = self.field.d() as u64;
        let mut rest = m.0;
        let digits = (0..self.k)
            .map(|_| {
                let u = (rest % d) as Elem;
                rest /= d;
                u
            })
            .collect();
        Ok(InfoSymbols(digits))
    }

    pub fn symbols_to_message(&self, u: &InfoSymbols) -> Tnid {
        let d = self.field.d() as u64;
        Tnid(u.0.iter().rev().fold(0u64, |acc, &x| acc * d + x as u64))
    }

    fn check_symbols(&self, u: &InfoSymbols) -> Result<(), CodecError> {
        if u.0.len() > self.n() - 1 {
            return Err(CodecError::KTooLarge {
                k: u.0.len(),
                n: self.n(),
            });
        }
        if let Some(&bad) = u.0.iter().find(|&&x| x >= self.field.d()) {
            return Err(CodecError::SymbolRange(bad as u64));
        }
        Ok(())
    }

    /// `c_j = sum_k u_k * beta^(j*k)`, the transform of `[0, u, 0, .., 0]`.
    pub fn encode(&self, u: &InfoSymbols) -> Result<Codeword, CodecError> {
        self.check_symbols(u)?;
        let f = &self.field;
        let c = (0..self.n())
            .map(|j| {
                u.0.iter().enumerate().fold(0, |acc, (i, &uk)| {
                    f.add(acc, f.mul(uk, f.beta_pow(j * (i + 1))))
                })
            })
            .collect();
        Ok(Codeword(c))
    }

    pub fn encode_tnid(&self, m: Tnid) -> Result<Codeword, CodecError> {
        self.encode(&self.message_to_symbols(m)?)
    }

    fn check_len(&self, len: usize) -> Result<(), CodecError> {
        if len != self.n() {
            return Err(CodecError::LengthMismatch {
                expected: self.n(),
                got: len,
            });
        }
        Ok(())
    }

    /// Inverse transform: element `j` is `n^-1 * sum_i c_i * beta^(-i*j)`.
    pub fn igft(&self, c: &Codeword) -> Result<Vec<Elem>, CodecError> {
        self.check_len(c.len())?;
        let f = &self.field;
        Ok((0..self.n())
            .map(|j| {
                let s = c.0.iter().enumerate().fold(0, |acc, (i, &ci)| {
                    f.add(acc, f.mul(ci % f.d(), f.beta_inv_pow(i * j)))
                });
                f.mul(s, f.n_inv())
            })
            .collect())
    }

    /// Full code membership: the reserved leading coefficient and the
    /// trailing `n - k - 1` coefficients of the inverse transform vanish.
    pub fn is_valid_codeword(&self, c: &Codeword) -> Result<bool, CodecError> {
        let coeffs = self.igft(c)?;
        Ok(coeffs[0] == 0 && coeffs[self.k + 1..].iter().all(|&x| x == 0))
    }

    /// Closed-form offset of a uniformly shifted codeword: `n^-1 * sum c_i`.
    pub fn estimate_offset(&self, c: &Codeword) -> Result<Elem, CodecError> {
        self.check_len(c.len())?;
        let f = &self.field;
        let s = c.0.iter().fold(0, |acc, &x| f.add(acc, x % f.d()));
        Ok(f.mul(s, f.n_inv()))
    }

    /// Number of symbols whose detected set contains the codeword's tone.
    pub fn score(&self, c: &Codeword, det: &DetectedTones) -> usize {
        c.0.iter()
            .enumerate()
            .filter(|&(j, &x)| det.contains(j, x))
            .count()
    }

    /// Every TNID whose codeword is matched in at least `tau` symbols,
    /// sorted by descending score then ascending TNID.
    pub fn decode_multi(
        &self,
        det: &DetectedTones,
        tau: usize,
    ) -> Result<Vec<DecodeResult>, CodecError> {
        self.check_len(det.len())?;
        if tau < self.k {
            return Err(CodecError::ThresholdTooLow { tau, k: self.k });
        }
        let mut out = if self.k == 1 {
            self.decode_single_digit(det, tau)
        } else {
            self.decode_by_interpolation(det, tau)
        };
        sort_results(&mut out);
        Ok(out)
    }

    // Each detected tone s in symbol j votes for the unique u with
    // u * beta^j = s, which is the same count as scoring every candidate.
    fn decode_single_digit(&self, det: &DetectedTones, tau: usize) -> Vec<DecodeResult> {
        let f = &self.field;
        let mut votes = vec![0u16; f.d() as usize];
        for (j, set) in det.symbols().iter().enumerate() {
            let inv = f.beta_inv_pow(j);
            for &s in set {
                votes[f.mul(s % f.d(), inv) as usize] += 1;
            }
        }
        votes
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v as usize >= tau)
            .map(|(u, &v)| DecodeResult {
                tnid: Tnid(u as u64),
                matches: v as usize,
                offset: 0,
            })
            .collect()
    }

    // Any codeword scoring >= tau is matched in at least k of the first
    // n - tau + k symbols, so k-subsets of that prefix suffice.
    fn decode_by_interpolation(&self, det: &DetectedTones, tau: usize) -> Vec<DecodeResult> {
        let n = self.n();
        let k = self.k;
        if tau > n {
            return Vec::new();
        }
        let prefix = (n - tau + k).min(n);
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for subset in k_subsets(prefix, k) {
            if subset.iter().any(|&j| det.symbols()[j].is_empty()) {
                continue;
            }
            let sets: Vec<&[Elem]> = subset
                .iter()
                .map(|&j| det.symbols()[j].as_slice())
                .collect();
            let mut pick = vec![0usize; k];
            loop {
                let tones: Vec<Elem> = pick.iter().zip(&sets).map(|(&i, s)| s[i]).collect();
                if let Some(u) = self.interpolate(&subset, &tones) {
                    let m = self.symbols_to_message(&u);
                    if seen.insert(m) {
                        let c = self.encode(&u).expect("interpolated symbols are in range");
                        let score = self.score(&c, det);
                        if score >= tau {
                            out.push(DecodeResult {
                                tnid: m,
                                matches: score,
                                offset: 0,
                            });
                        }
                    }
                }
                // odometer over the chosen tones
                let mut pos = 0;
                loop {
                    if pos == k {
                        break;
                    }
                    pick[pos] += 1;
                    if pick[pos] < sets[pos].len() {
                        break;
                    }
                    pick[pos] = 0;
                    pos += 1;
                }
                if pos == k {
                    break;
                }
            }
        }
        out
    }

    /// Solves `sum_k u_k x_i^k = s_i` with `x_i = beta^(j_i)` for the
    /// information digits.
    fn interpolate(&self, positions: &[usize], tones: &[Elem]) -> Option<InfoSymbols> {
        let f = &self.field;
        let k = self.k;
        let mut a: Vec<Vec<Elem>> = positions
            .iter()
            .zip(tones)
            .map(|(&j, &s)| {
                let mut row: Vec<Elem> = (1..=k).map(|p| f.beta_pow(j * p)).collect();
                row.push(s % f.d());
                row
            })
            .collect();
        for col in 0..k {
            let piv = (col..k).find(|&r| a[r][col] != 0)?;
            a.swap(col, piv);
            let inv = f.inv(a[col][col]).ok()?;
            for x in a[col].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pivot = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != col && row[col] != 0 {
                    let factor = row[col];
                    for (x, &p) in row.iter_mut().zip(&pivot).skip(col) {
                        *x = f.sub(*x, f.mul(factor, p));
                    }
                }
            }
        }
        Some(InfoSymbols(a.iter().map(|row| row[k]).collect()))
    }

    /// Runs [`Self::decode_multi`] under every offset hypothesis in
    /// `-delta_max..=delta_max` and keeps, per TNID, the hypothesis with the
    /// highest score (ties go to the smallest `|δ|`, then the negative one).
    pub fn decode_with_offset_search(
        &self,
        det: &DetectedTones,
        tau: usize,
        delta_max: u32,
    ) -> Result<Vec<DecodeResult>, CodecError> {
        if delta_max >= self.field.d() {
            return Err(CodecError::OffsetRange {
                delta_max,
                d: self.field.d(),
            });
        }
        if delta_max == 0 {
            return self.decode_multi(det, tau);
        }
        let mut best: Vec<DecodeResult> = Vec::new();
        let dm = delta_max as i64;
        let mut hypotheses: Vec<i64> = (-dm..=dm).collect();
        hypotheses.sort_by_key(|&x| (x.abs(), x));
        for delta in hypotheses {
            let shifted = det.shifted(&self.field, -delta);
            for mut r in self.decode_multi(&shifted, tau)? {
                r.offset = delta;
                match best.iter_mut().find(|b| b.tnid == r.tnid) {
                    Some(b) if r.matches > b.matches => *b = r,
                    Some(_) => {}
                    None => best.push(r),
                }
            }
        }
        sort_results(&mut best);
        Ok(best)
    }
}

fn sort_results(v: &mut [DecodeResult]) {
    v.sort_by(|a, b| b.matches.cmp(&a.matches).then(a.tnid.cmp(&b.tnid)));
}

/// All increasing `k`-subsets of `0..n`.
fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf7(n: u64, k: usize) -> DiscoveryCode {
        DiscoveryCode::with_params(7, n, k).unwrap()
    }

    // Literal matrix-vector product with the transform matrix, with powers
    // computed by repeated multiplication.
    fn matrix_gft(d: u64, beta: u64, n: usize, padded: &[u64]) -> Vec<u32> {
        (0..n)
            .map(|row| {
                let mut acc = 0u64;
                for (col, &x) in padded.iter().enumerate() {
                    let mut p = 1u64;
                    for _ in 0..row * col {
                        p = p * beta % d;
                    }
                    acc = (acc + x * p) % d;
                }
                acc as u32
            })
            .collect()
    }

    #[test]
    fn message_digits() {
        let c = gf7(3, 2);
        assert_eq!(
            c.message_to_symbols(Tnid(9)).unwrap(),
            InfoSymbols(vec![2, 1])
        );
        assert_eq!(c.symbols_to_message(&InfoSymbols(vec![2, 1])), Tnid(9));
        assert_eq!(
            c.message_to_symbols(Tnid(49)),
            Err(CodecError::OutOfRange { m: 49, pool: 49 })
        );
        for m in 0..49 {
            let u = c.message_to_symbols(Tnid(m)).unwrap();
            assert_eq!(c.symbols_to_message(&u), Tnid(m));
        }
        let c1 = gf7(3, 1);
        assert_eq!(
            c1.message_to_symbols(Tnid(5)).unwrap(),
            InfoSymbols(vec![5])
        );
        assert_eq!(c1.symbols_to_message(&InfoSymbols(vec![0])), Tnid(0));
        let big = DiscoveryCode::with_params(521, 8, 1).unwrap();
        assert_eq!(
            big.message_to_symbols(Tnid(520)).unwrap(),
            InfoSymbols(vec![520])
        );
    }

    #[test]
    fn encode_examples() {
        assert_eq!(
            gf7(3, 1).encode(&InfoSymbols(vec![5])).unwrap().0,
            vec![5, 3, 6]
        );
        assert_eq!(
            gf7(6, 1).encode(&InfoSymbols(vec![1])).unwrap().0,
            vec![1, 3, 2, 6, 4, 5]
        );
        assert_eq!(
            gf7(6, 2).encode(&InfoSymbols(vec![0, 0])).unwrap().0,
            vec![0; 6]
        );
        assert_eq!(
            DiscoveryCode::with_params(7, 3, 3),
            Err(CodecError::KTooLarge { k: 3, n: 3 })
        );
        assert!(matches!(
            gf7(3, 1).encode(&InfoSymbols(vec![1, 2, 3])),
            Err(CodecError::KTooLarge { .. })
        ));
    }

    #[test]
    fn encode_matches_matrix_product() {
        for (n, k) in [(3u64, 1usize), (3, 2), (6, 1), (6, 2), (6, 4)] {
            let code = gf7(n, k);
            let beta = code.field().beta() as u64;
            for m in 0..code.pool_size() {
                let u = code.message_to_symbols(Tnid(m)).unwrap();
                let mut padded = vec![0u64; n as usize];
                for (i, &x) in u.0.iter().enumerate() {
                    padded[i + 1] = x as u64;
                }
                let expect = matrix_gft(7, beta, n as usize, &padded);
                assert_eq!(code.encode(&u).unwrap().0, expect);
            }
        }
    }

    #[test]
    fn igft_examples() {
        let code = gf7(3, 1);
        assert_eq!(code.igft(&Codeword(vec![5, 3, 6])).unwrap(), vec![0, 5, 0]);
        assert_eq!(code.igft(&Codeword(vec![0, 0, 0])).unwrap(), vec![0, 0, 0]);
        assert!(matches!(
            code.igft(&Codeword(vec![1, 2])),
            Err(CodecError::LengthMismatch { .. })
        ));
        for u in 0..7 {
            let c = code.encode(&InfoSymbols(vec![u])).unwrap();
            assert_eq!(code.igft(&c).unwrap(), vec![0, u, 0]);
        }
    }

    #[test]
    fn validity_and_offset_examples() {
        let code = gf7(3, 1);
        assert!(code.is_valid_codeword(&Codeword(vec![5, 3, 6])).unwrap());
        assert!(!code.is_valid_codeword(&Codeword(vec![6, 4, 0])).unwrap());
        assert!(code.is_valid_codeword(&Codeword(vec![0, 0, 0])).unwrap());
        assert_eq!(code.estimate_offset(&Codeword(vec![6, 4, 0])).unwrap(), 1);
        assert_eq!(code.estimate_offset(&Codeword(vec![5, 3, 6])).unwrap(), 0);
    }

    #[test]
    fn full_membership_rejects_wrong_tail() {
        // [0, 1, 1] transforms to a non-code word for k = 1 with zero mean.
        let code = gf7(3, 1);
        let two = gf7(3, 2);
        let c = two.encode(&InfoSymbols(vec![1, 1])).unwrap();
        assert_eq!(code.estimate_offset(&c).unwrap(), 0);
        assert!(!code.is_valid_codeword(&c).unwrap());
        assert!(two.is_valid_codeword(&c).unwrap());
    }

    #[test]
    fn capacity_and_capability() {
        assert!(capacity_ok(16, 2, 15));
        assert!(!capacity_ok(16, 2, 16));
        for d in 1..2000 {
            assert!(capacity_ok(8, 1, d));
        }
        assert_eq!(correction_capability(8, 1), (3, 7));
        assert_eq!(correction_capability(16, 2), (7, 14));
        assert_eq!(correction_capability(5, 5), (0, 0));
    }

    // Scores every candidate against the detected sets.
    fn brute_scores(code: &DiscoveryCode, det: &DetectedTones) -> Vec<(u64, usize)> {
        (0..code.pool_size())
            .map(|m| {
                let c = code.encode_tnid(Tnid(m)).unwrap();
                let s =
                    c.0.iter()
                        .enumerate()
                        .filter(|(j, x)| det.symbols()[*j].contains(x))
                        .count();
                (m, s)
            })
            .collect()
    }

    #[test]
    fn decode_multi_examples() {
        let code = gf7(3, 1);
        let det = DetectedTones::new(vec![vec![5, 1], vec![3, 2], vec![6, 4]]);
        let got = code.decode_multi(&det, 1).unwrap();
        let pairs: Vec<_> = got.iter().map(|r| (r.tnid.0, r.matches)).collect();
        assert_eq!(pairs, vec![(1, 3), (5, 3)]);
        for (m, s) in brute_scores(&code, &det) {
            assert_eq!(s, if m == 1 || m == 5 { 3 } else { 0 });
        }

        let det = DetectedTones::new(vec![vec![5], vec![0], vec![6]]);
        let got = code.decode_multi(&det, 2).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!((got[0].tnid, got[0].matches), (Tnid(5), 2));

        assert!(code
            .decode_multi(&DetectedTones::empty(3), 1)
            .unwrap()
            .is_empty());
        assert_eq!(
            gf7(3, 2).decode_multi(&DetectedTones::empty(3), 1),
            Err(CodecError::ThresholdTooLow { tau: 1, k: 2 })
        );
    }

    #[test]
    fn interpolation_decoder_agrees_with_brute_force() {
        let code = gf7(6, 2);
        let picks = [(3u64, 10u64), (40, 0), (17, 18), (48, 1)];
        for &(a, b) in &picks {
            let cw: Vec<Codeword> = [a, b]
                .iter()
                .map(|&m| code.encode_tnid(Tnid(m)).unwrap())
                .collect();
            let mut det = DetectedTones::from_codewords(6, &cw);
            // add some junk tones
            det = DetectedTones::new(
                det.symbols()
                    .iter()
                    .enumerate()
                    .map(|(j, s)| {
                        let mut s = s.clone();
                        s.push((j as u32 * 3 + 1) % 7);
                        s
                    })
                    .collect(),
            );
            for tau in 2..=6 {
                let mut expect: Vec<(u64, usize)> = brute_scores(&code, &det)
                    .into_iter()
                    .filter(|&(_, s)| s >= tau)
                    .collect();
                expect.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(&y.0)));
                let got: Vec<(u64, usize)> = code
                    .decode_multi(&det, tau)
                    .unwrap()
                    .iter()
                    .map(|r| (r.tnid.0, r.matches))
                    .collect();
                assert_eq!(got, expect, "tau={tau}");
            }
        }
    }

    #[test]
    fn offset_search_examples() {
        let code = gf7(3, 1);
        let c = code.encode_tnid(Tnid(5)).unwrap();
        let det = DetectedTones::from_codewords(3, [&c.shifted(code.field(), 1)]);
        let got = code.decode_with_offset_search(&det, 2, 2).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(
            (got[0].tnid, got[0].matches, got[0].offset),
            (Tnid(5), 3, 1)
        );

        let plain = DetectedTones::from_codewords(3, [&c]);
        let got = code.decode_with_offset_search(&plain, 2, 2).unwrap();
        assert_eq!((got[0].tnid, got[0].offset), (Tnid(5), 0));
        assert_eq!(
            code.decode_with_offset_search(&plain, 2, 0).unwrap(),
            code.decode_multi(&plain, 2).unwrap()
        );
        assert_eq!(
            code.decode_with_offset_search(&plain, 2, 7),
            Err(CodecError::OffsetRange { delta_max: 7, d: 7 })
        );
    }

    #[test]
    fn k_subsets_counts() {
        assert_eq!(k_subsets(5, 2).len(), 10);
        assert_eq!(k_subsets(4, 4), vec![vec![0, 1, 2, 3]]);
        assert_eq!(k_subsets(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
