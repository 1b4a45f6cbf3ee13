//! Prime-field arithmetic GF(D) with primitive-root and root-of-unity lookup.
//!
//! Elements are canonical residues `0..d`. Subcarrier indices and field
//! elements are the same thing, so a frequency offset of `δ` bins is field
//! addition of `δ`.

use thiserror::Error;

/// A field element, always a canonical residue in `0..d`.
pub type Elem = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{n} does not divide {d} - 1")]
    NotDivisor { d: u64, n: u64 },
    #[error("field size {0} too small (need d >= 3)")]
    TooSmall(u64),
    #[error("field size {0} too large (need d < 2^31)")]
    TooLarge(u64),
    #[error("codeword length must be at least 1")]
    ZeroLength,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
}

/// Arithmetic selector, mirrors the operations exposed as methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Inv,
    Pow,
}

/// GF(d) together with a primitive root `alpha` and an element `beta` of
/// multiplicative order exactly `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldParams {
    d: u32,
    alpha: u32,
    n: u32,
    beta: u32,
    n_inv: u32,
    // beta^j and beta^-j for j in 0..n
    beta_pow: Vec<u32>,
    beta_inv_pow: Vec<u32>,
}

pub fn is_prime(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    if d.is_multiple_of(2) {
        return d == 2;
    }
    let mut i = 3;
    while i * i <= d {
        if d.is_multiple_of(i) {
            return false;
        }
        i += 2;
    }
    true
}

fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= x {
        if x.is_multiple_of(f) {
            out.push(f);
            while x.is_multiple_of(f) {
                x /= f;
            }
        }
        f += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc
}

impl FieldParams {
    /// Builds GF(d) with the smallest primitive root and
    /// `beta = alpha^((d-1)/n)`.
    pub fn new(d: u64, n: u64) -> Result<Self, FieldError> {
        if d < 3 {
            return Err(FieldError::TooSmall(d));
        }
        if d >= 1 << 31 {
            return Err(FieldError::TooLarge(d));
        }
        if !is_prime(d) {
            return Err(FieldError::NotPrime(d));
        }
        if n == 0 {
            return Err(FieldError::ZeroLength);
        }
        if !(d - 1).is_multiple_of(n) {
            return Err(FieldError::NotDivisor { d, n });
        }
        let factors = prime_factors(d - 1);
        let alpha = (2..d)
            .find(|&a| factors.iter().all(|&q| pow_mod(a, (d - 1) / q, d) != 1))
            .expect("every prime field has a primitive root");
        let beta = pow_mod(alpha, (d - 1) / n, d);
        let beta_inv = pow_mod(beta, d - 2, d);
        let mut beta_pow = Vec::with_capacity(n as usize);
        let mut beta_inv_pow = Vec::with_capacity(n as usize);
        let (mut x, mut y) = (1u64, 1u64);
        for _ in 0..n {
            beta_pow.push(x as u32);
            beta_inv_pow.push(y as u32);
            x = x * beta % d;
            y = y * beta_inv % d;
        }
        Ok(FieldParams {
            d: d as u32,
            alpha: alpha as u32,
            n: n as u32,
            beta: beta as u32,
            n_inv: pow_mod(n % d, d - 2, d) as u32,
            beta_pow,
            beta_inv_pow,
        })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    /// `n^-1` in the field.
    pub fn n_inv(&self) -> u32 {
        self.n_inv
    }

    /// `beta^e` for any integer exponent (reduced mod n).
    #[inline]
    pub fn beta_pow(&self, e: usize) -> Elem {
        self.beta_pow[e % self.n as usize]
    }

    /// `beta^-e` for any integer exponent (reduced mod n).
    #[inline]
    pub fn beta_inv_pow(&self, e: usize) -> Elem {
        self.beta_inv_pow[e % self.n as usize]
    }

    /// Reduces an arbitrary signed integer to its canonical residue.
    #[inline]
    pub fn reduce(&self, x: i64) -> Elem {
        x.rem_euclid(self.d as i64) as Elem
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let s = a as u64 + b as u64;
        (s % self.d as u64) as Elem
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        let s = a as u64 + self.d as u64 - b as u64;
        (s % self.d as u64) as Elem
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        (a as u64 * b as u64 % self.d as u64) as Elem
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        pow_mod(a as u64, e, self.d as u64) as Elem
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a.is_multiple_of(self.d) {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.d as u64 - 2))
    }

    /// Dispatches on `op`; for `Pow` the second operand is the exponent and
    /// for `Inv` it is ignored.
    pub fn apply(&self, op: FieldOp, a: Elem, b: u64) -> Result<Elem, FieldError> {
        let a = a % self.d;
        let bf = (b % self.d as u64) as Elem;
        Ok(match op {
            FieldOp::Add => self.add(a, bf),
            FieldOp::Sub => self.sub(a, bf),
            FieldOp::Mul => self.mul(a, bf),
            FieldOp::Inv => self.inv(a)?,
            FieldOp::Pow => self.pow(a, b),
        })
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Elem) -> Option<u32> {
        if a.is_multiple_of(self.d) {
            return None;
        }
        let mut x = a % self.d;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        Some(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Brute-force order by repeated multiplication, independent of pow_mod.
    fn naive_order(a: u64, d: u64) -> u64 {
        let mut x = a % d;
        let mut k = 1;
        while x != 1 {
            x = x * a % d;
            k += 1;
        }
        k
    }

    #[test]
    fn small_field_examples() {
        let f = FieldParams::new(7, 3).unwrap();
        assert_eq!((f.alpha(), f.beta()), (3, 2));
        let f = FieldParams::new(7, 6).unwrap();
        assert_eq!((f.alpha(), f.beta()), (3, 3));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldParams::new(512, 8), Err(FieldError::NotPrime(512)));
        assert_eq!(
            FieldParams::new(7, 4),
            Err(FieldError::NotDivisor { d: 7, n: 4 })
        );
        assert_eq!(FieldParams::new(2, 1), Err(FieldError::TooSmall(2)));
        assert_eq!(FieldParams::new(7, 0), Err(FieldError::ZeroLength));
    }

    #[test]
    fn alpha_is_smallest_primitive_root() {
        for d in [3u64, 5, 7, 11, 13, 17, 257, 521] {
            let f = FieldParams::new(d, 1).unwrap();
            let smallest = (2..d).find(|&a| naive_order(a, d) == d - 1).unwrap();
            assert_eq!(f.alpha() as u64, smallest, "d={d}");
        }
        assert_eq!(FieldParams::new(521, 8).unwrap().alpha(), 3);
    }

    #[test]
    fn arithmetic_examples() {
        let f = FieldParams::new(7, 1).unwrap();
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), Ok(5));
        assert_eq!(f.pow(2, 3), 1);
        assert_eq!(f.inv(0), Err(FieldError::ZeroInverse));
        assert_eq!(f.apply(FieldOp::Sub, 2, 5), Ok(4));
        assert_eq!(f.apply(FieldOp::Add, 6, 3), Ok(2));
        assert_eq!(f.apply(FieldOp::Pow, 3, 6), Ok(1));
        assert_eq!(f.apply(FieldOp::Inv, 0, 0), Err(FieldError::ZeroInverse));
        assert_eq!(f.reduce(-1), 6);
    }

    #[test]
    fn inverse_exhaustive_up_to_1000() {
        for d in (3..1000u64).filter(|&d| is_prime(d)) {
            let f = FieldParams::new(d, 1).unwrap();
            for a in 1..d as u32 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "d={d} a={a}");
            }
        }
    }

    #[test]
    fn beta_has_exact_order_n() {
        for (d, n) in [
            (7u64, 3u64),
            (7, 6),
            (17, 16),
            (17, 8),
            (257, 8),
            (521, 8),
            (521, 520),
        ] {
            let f = FieldParams::new(d, n).unwrap();
            assert_eq!(naive_order(f.beta() as u64, d), n, "d={d} n={n}");
            assert_eq!(f.mul(f.n() as u32 % f.d(), f.n_inv()), 1);
        }
    }

    #[test]
    fn root_of_unity_orthogonality() {
        for (d, n) in [(7u64, 3u64), (7, 6), (17, 16), (257, 8), (521, 8)] {
            let f = FieldParams::new(d, n).unwrap();
            for m in 1..n as usize {
                let s = (0..n as usize).fold(0, |acc, j| f.add(acc, f.beta_pow(j * m)));
                assert_eq!(s, 0, "d={d} n={n} m={m}");
            }
            assert_eq!(f.mul(f.beta_pow(3), f.beta_inv_pow(3)), 1);
        }
    }
}
