//! Exact arithmetic in the cyclotomic field Q(zeta_N).
//!
//! A [`Scalar`] is the residue of a rational polynomial modulo the N-th
//! cyclotomic polynomial, stored in the power basis 1, z, ..., z^(phi(N)-1).
//! One level N is fixed per session (the lcm of all roots of unity the
//! fixture mentions); arithmetic never changes the level.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept reduced with positive denominator.
pub type Rational = BigRational;

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Euler totient, by trial-division factorization. Levels are tiny.
pub fn totient(mut n: u32) -> u32 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u32) -> Vec<u32> {
    let mut d: Vec<u32> = (1..=n).filter(|k| n % k == 0).collect();
    d.sort_unstable();
    d
}

/// Quotient of polynomial division `num / den` for monic `den`, exact.
fn poly_div_exact(num: &[Rational], den: &[Rational]) -> Vec<Rational> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<Rational> = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![Rational::zero()];
    }
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        quot[i - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let t = &c * dj;
            rem[i - dd + j] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    out
}

/// The N-th cyclotomic polynomial, monic, as a dense coefficient vector.
///
/// Computed by dividing x^N - 1 by the cyclotomic polynomials of the proper
/// divisors of N; results are cached for the session.
pub fn cyclotomic_poly(n: u32) -> Vec<Rational> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<Rational>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&n) {
        return p.clone();
    }
    let poly = if n == 1 {
        vec![-Rational::one(), Rational::one()] // x - 1
    } else {
        let mut num = vec![Rational::zero(); (n + 1) as usize];
        num[0] = -Rational::one();
        num[n as usize] = Rational::one();
        let mut q = num;
        for d in divisors(n) {
            if d < n {
                let phi_d = cyclotomic_poly(d);
                q = poly_div_exact(&q, &phi_d);
            }
        }
        q
    };
    cache.lock().unwrap().insert(n, poly.clone());
    poly
}

/// An element of Q(zeta_N) in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct Scalar {
    level: u32,
    coeffs: Vec<Rational>,
}

impl Scalar {
    /// Degree of the field extension at `level`.
    pub fn degree(level: u32) -> usize {
        totient(level) as usize
    }

    pub fn zero(level: u32) -> Self {
        Scalar { level, coeffs: vec![Rational::zero(); Self::degree(level)] }
    }

    pub fn one(level: u32) -> Self {
        Self::from_rational(level, Rational::one())
    }

    pub fn from_rational(level: u32, q: Rational) -> Self {
        let mut s = Self::zero(level);
        s.coeffs[0] = q;
        s
    }

    pub fn from_int(level: u32, n: i64) -> Self {
        Self::from_rational(level, rat_int(n))
    }

    /// Builds a scalar from raw power-basis coefficients, reducing mod Phi_N.
    pub fn from_coeffs(level: u32, coeffs: Vec<Rational>) -> Self {
        let mut s = Scalar { level, coeffs };
        s.reduce();
        s
    }

    /// The generator zeta_N of the session field.
    pub fn zeta(level: u32) -> Self {
        let mut c = vec![Rational::zero(); Self::degree(level).max(2)];
        c[1] = Rational::one();
        Self::from_coeffs(level, c)
    }

    /// zeta_n^k inside the session field, requiring n | level.
    pub fn root_of_unity(level: u32, n: u32, k: i64) -> Result<Self> {
        if n == 0 || level % n != 0 {
            return Err(Error::LevelNotDivisible(n, level));
        }
        let step = (level / n) as i64;
        let e = (k * step).rem_euclid(level as i64) as usize;
        let mut c = vec![Rational::zero(); e + 1];
        c[e] = Rational::one();
        Ok(Self::from_coeffs(level, c))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn reduce(&mut self) {
        let deg = Self::degree(self.level);
        if self.coeffs.len() > deg {
            let phi = cyclotomic_poly(self.level);
            // Reduce top coefficients downward against the monic modulus.
            for i in (deg..self.coeffs.len()).rev() {
                let c = std::mem::replace(&mut self.coeffs[i], Rational::zero());
                if c.is_zero() {
                    continue;
                }
                for (j, pj) in phi.iter().enumerate().take(phi.len() - 1) {
                    let t = &c * pj;
                    self.coeffs[i - deg + j] -= t;
                }
            }
        }
        self.coeffs.resize(deg, Rational::zero());
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level, other.level));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Scalar { level: self.level, coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.level));
        }
        let prod = poly_mul(&self.coeffs, &other.coeffs);
        Ok(Self::from_coeffs(self.level, prod))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Phi_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let phi = cyclotomic_poly(self.level);
        // Extended gcd of self.coeffs (as polynomial) and phi in Q[x].
        let mut r0: Vec<Rational> = phi.clone();
        let mut r1: Vec<Rational> = trim(self.coeffs.clone());
        let mut s0: Vec<Rational> = vec![Rational::zero()];
        let mut s1: Vec<Rational> = vec![Rational::one()];
        while !is_zero_poly(&r1) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s_next = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = trim(s_next);
        }
        // r0 = gcd, a nonzero constant since Phi_N is irreducible.
        debug_assert!(r0.len() == 1 && !r0[0].is_zero());
        let g = r0[0].clone();
        let inv_coeffs: Vec<Rational> = s0.iter().map(|c| c / &g).collect();
        Ok(Self::from_coeffs(self.level, inv_coeffs))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e == 0 {
            return Ok(Self::one(self.level));
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one(self.level);
        for _ in 0..e.unsigned_abs() {
            acc = acc.checked_mul(&base)?;
        }
        Ok(acc)
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    trim(out)
}

/// Division with remainder in Q[x]; divisor need not be monic.
fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let den = trim(den.to_vec());
    let lead = den.last().unwrap().clone();
    let dd = den.len() - 1;
    let mut rem = trim(num.to_vec());
    if rem.len() <= dd && !(dd == 0) {
        return (vec![Rational::zero()], rem);
    }
    if dd == 0 {
        let q: Vec<Rational> = rem.iter().map(|c| c / &lead).collect();
        return (q, vec![Rational::zero()]);
    }
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(dd).max(1)];
    while rem.len() > dd && !is_zero_poly(&rem) {
        let c = rem.last().unwrap() / &lead;
        let shift = rem.len() - 1 - dd;
        quot[shift] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            let t = &c * dj;
            rem[shift + j] -= t;
        }
        rem = trim(rem);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
    }
    (trim(quot), trim(rem))
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.checked_add(rhs).expect("scalar level mismatch")
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { level: self.level, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.checked_mul(rhs).expect("scalar level mismatch")
    }
}

impl std::ops::AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        assert_eq!(self.level, rhs.level, "scalar level mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl std::ops::SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        assert_eq!(self.level, rhs.level, "scalar level mismatch");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Textual form "c0 + c1*z + ...", omitting zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            let coeff = fmt_rational(&mag);
            match i {
                0 => write!(f, "{}", coeff)?,
                1 if mag.is_one() => write!(f, "z")?,
                1 => write!(f, "{}*z", coeff)?,
                _ if mag.is_one() => write!(f, "z^{}", i)?,
                _ => write!(f, "{}*z^{}", coeff, i)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[{}]({})", self.level, self)
    }
}

/// Parses the textual scalar form at a given level.
///
/// Accepts sums of terms `p/q`, `p/q*z^k`, `z^k`, `z`, with optional signs.
pub fn parse_scalar(level: u32, text: &str) -> Result<Scalar> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let mut coeffs: Vec<Rational> = vec![Rational::zero(); Scalar::degree(level).max(1)];
    // Split into signed terms.
    let mut terms: Vec<(i32, String)> = Vec::new();
    let mut sign = 1i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '+' => {
                if !cur.trim().is_empty() {
                    terms.push((sign, cur.trim().to_string()));
                }
                cur = String::new();
                sign = 1;
            }
            '-' => {
                if !cur.trim().is_empty() {
                    terms.push((sign, cur.trim().to_string()));
                    sign = 1;
                }
                cur = String::new();
                sign = -sign;
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur.trim().to_string()));
    }
    if terms.is_empty() {
        return Err(Error::Parse(format!("cannot parse scalar: {text}")));
    }
    for (sgn, term) in terms {
        let (coeff_str, power) = if let Some(pos) = term.find('z') {
            let before = term[..pos].trim().trim_end_matches('*').trim();
            let after = term[pos + 1..].trim();
            let power = if after.is_empty() {
                1usize
            } else if let Some(e) = after.strip_prefix('^') {
                e.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent in: {term}")))?
            } else {
                return Err(Error::Parse(format!("bad term: {term}")));
            };
            (if before.is_empty() { "1".to_string() } else { before.to_string() }, power)
        } else {
            (term.clone(), 0usize)
        };
        let q = parse_rational(&coeff_str)?;
        let q = if sgn < 0 { -q } else { q };
        if power >= coeffs.len() {
            coeffs.resize(power + 1, Rational::zero());
        }
        coeffs[power] += q;
    }
    Ok(Scalar::from_coeffs(level, coeffs))
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| Error::Parse(format!("bad rational: {s}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| Error::Parse(format!("bad rational: {s}")))?;
        if q.is_zero() {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational::new(p, q))
    } else {
        let p = BigInt::from_str(s).map_err(|_| Error::Parse(format!("bad rational: {s}")))?;
        Ok(Rational::from_integer(p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polys_match_known_tables() {
        // Phi_1 = x - 1, Phi_2 = x + 1, Phi_3 = x^2 + x + 1, Phi_4 = x^2 + 1,
        // Phi_6 = x^2 - x + 1, Phi_8 = x^4 + 1, Phi_12 = x^4 - x^2 + 1.
        let to_i64 = |p: Vec<Rational>| -> Vec<i64> {
            p.iter().map(|c| {
                assert!(c.denom().is_one());
                i64::try_from(c.numer().clone()).unwrap()
            }).collect()
        };
        assert_eq!(to_i64(cyclotomic_poly(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(2)), vec![1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(3)), vec![1, 1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(4)), vec![1, 0, 1]);
        assert_eq!(to_i64(cyclotomic_poly(6)), vec![1, -1, 1]);
        assert_eq!(to_i64(cyclotomic_poly(8)), vec![1, 0, 0, 0, 1]);
        assert_eq!(to_i64(cyclotomic_poly(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cyclotomic_product_over_divisors_is_x_n_minus_1() {
        for n in [1u32, 2, 3, 4, 6, 8, 9, 12] {
            let mut prod = vec![Rational::one()];
            for d in divisors(n) {
                prod = poly_mul(&prod, &cyclotomic_poly(d));
            }
            let mut expect = vec![Rational::zero(); (n + 1) as usize];
            expect[0] = -Rational::one();
            expect[n as usize] = Rational::one();
            assert_eq!(trim(prod), trim(expect), "n={n}");
        }
    }

    #[test]
    fn additive_identity_and_rational_sum() {
        let x = Scalar::zeta(12);
        assert_eq!(&Scalar::zero(12) + &x, x);
        let a = Scalar::from_rational(5, rat(1, 2));
        let b = Scalar::from_rational(5, rat(1, 3));
        assert_eq!(&a + &b, Scalar::from_rational(5, rat(5, 6)));
    }

    #[test]
    fn zeta3_plus_zeta3_squared_is_minus_one() {
        // Reduce mod Phi_3 = x^2 + x + 1 by hand: z + z^2 = -1.
        let z = Scalar::zeta(3);
        let z2 = z.pow(2).unwrap();
        assert_eq!(&z + &z2, Scalar::from_int(3, -1));
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let z = Scalar::zeta(4);
        assert_eq!(&z * &z, Scalar::from_int(4, -1));
    }

    #[test]
    fn zeta_n_to_the_n_is_one() {
        for n in [1u32, 2, 3, 4, 5, 6, 8, 12] {
            assert!(Scalar::zeta(n).pow(n as i64).unwrap().is_one(), "n={n}");
        }
    }

    #[test]
    fn inverse_examples() {
        assert!(Scalar::one(6).inv().unwrap().is_one());
        assert_eq!(Scalar::from_int(8, 2).inv().unwrap(), Scalar::from_rational(8, rat(1, 2)));
        // inv(zeta_3) = zeta_3^2 = -1 - z in the power basis.
        let z = Scalar::zeta(3);
        let inv = z.inv().unwrap();
        assert_eq!(inv, Scalar::from_coeffs(3, vec![rat_int(-1), rat_int(-1)]));
        assert!((&z * &inv).is_one());
        assert!(matches!(Scalar::zero(3).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn root_of_unity_examples() {
        assert!(Scalar::root_of_unity(12, 1, 0).unwrap().is_one());
        assert_eq!(Scalar::root_of_unity(12, 2, 1).unwrap(), Scalar::from_int(12, -1));
        let i = Scalar::root_of_unity(4, 4, 1).unwrap();
        assert_eq!(&i * &i, Scalar::from_int(4, -1));
        assert!(Scalar::root_of_unity(4, 3, 1).is_err());
    }

    #[test]
    fn zeta_has_multiplicative_order_exactly_n() {
        for n in [2u32, 3, 4, 6, 8, 12] {
            let z = Scalar::zeta(n);
            for k in 1..n {
                assert!(!z.pow(k as i64).unwrap().is_one(), "n={n} k={k}");
            }
            assert!(z.pow(n as i64).unwrap().is_one());
        }
    }

    #[test]
    fn level_mismatch_is_an_error() {
        let a = Scalar::one(3);
        let b = Scalar::one(4);
        assert!(matches!(a.checked_add(&b), Err(Error::LevelMismatch(3, 4))));
        assert!(matches!(a.checked_mul(&b), Err(Error::LevelMismatch(3, 4))));
    }

    #[test]
    fn display_parse_round_trip() {
        for text in ["0", "1", "-1/2", "z", "2*z^3 - 1/3", "1 + z + z^2"] {
            let s = parse_scalar(12, text).unwrap();
            let back = parse_scalar(12, &s.to_string()).unwrap();
            assert_eq!(s, back, "text={text}");
        }
    }

    fn arb_scalar(level: u32) -> impl Strategy<Value = Scalar> {
        let deg = Scalar::degree(level);
        proptest::collection::vec((-6i64..7, 1i64..5), deg).prop_map(move |cs| {
            Scalar::from_coeffs(level, cs.into_iter().map(|(p, q)| rat(p, q)).collect())
        })
    }

    proptest! {
        #[test]
        fn field_axioms_level_12(a in arb_scalar(12), b in arb_scalar(12), c in arb_scalar(12)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                let ai = a.inv().unwrap();
                prop_assert!((&a * &ai).is_one());
            }
        }

        #[test]
        fn canonical_form_is_idempotent(a in arb_scalar(8)) {
            let again = Scalar::from_coeffs(8, a.coeffs().to_vec());
            prop_assert_eq!(a, again);
        }
    }
}
