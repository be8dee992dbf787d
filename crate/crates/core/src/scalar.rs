//! Exact scalar arithmetic for amplitudes and probabilities.
//!
//! Amplitudes of Clifford+T circuits live in the ring ℤ\[ω\] with ω = e^{iπ/4},
//! scaled by a global power of 1/√2. Since ω⁴ = −1, the powers ω³, ω², ω, 1
//! form a free ℤ-basis, so every element has a unique representation
//! a·ω³ + b·ω² + c·ω + d. Squared magnitudes of such elements, and hence all
//! measurement probabilities, are exact values p + q√2 with rational p, q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub const SQRT_2: f64 = std::f64::consts::SQRT_2;

/// An element a·ω³ + b·ω² + c·ω + d of ℤ\[ω\], ω = e^{iπ/4}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaInt {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl OmegaInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        OmegaInt { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn zero() -> Self {
        OmegaInt::new(0, 0, 0, 0)
    }

    /// The constant 1 (basis element ω⁰).
    pub fn one() -> Self {
        OmegaInt::new(0, 0, 0, 1)
    }

    /// The basis element ω^e for e in 0..8.
    pub fn omega_pow(e: u32) -> Self {
        OmegaInt::one().times_omega_pow(e)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    /// Multiply by ω^e. One ω step maps (a,b,c,d) to (b,c,d,−a), forced by
    /// ω⁴ = −1; e is reduced mod 8.
    pub fn times_omega_pow(&self, e: u32) -> Self {
        let mut v = self.clone();
        for _ in 0..(e % 8) {
            v = OmegaInt {
                a: v.b,
                b: v.c,
                c: v.d,
                d: -v.a,
            };
        }
        v
    }

    /// Multiply by i = ω².
    pub fn times_i(&self) -> Self {
        self.times_omega_pow(2)
    }

    /// Squared magnitude |a·ω³ + b·ω² + c·ω + d|². Substituting
    /// ω = (1+i)/√2 and expanding gives
    /// (a²+b²+c²+d²) + √2·(ab + bc + cd − ad), always ≥ 0.
    pub fn sq_norm(&self) -> RootTwoRational {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let p = a * a + b * b + c * c + d * d;
        let q = a * b + b * c + c * d - a * d;
        RootTwoRational::from_ints(p, q)
    }

    /// Numerical value as (re, im); for cross-checks against float math only.
    pub fn approx(&self) -> (f64, f64) {
        let a = big_to_f64(&self.a);
        let b = big_to_f64(&self.b);
        let c = big_to_f64(&self.c);
        let d = big_to_f64(&self.d);
        // ω = (1+i)/√2, ω² = i, ω³ = (−1+i)/√2
        let re = d + (c - a) / SQRT_2;
        let im = b + (a + c) / SQRT_2;
        (re, im)
    }

    /// True when every component is even (the value is divisible by 2).
    pub fn all_even(&self) -> bool {
        fn even(x: &BigInt) -> bool {
            (x % 2u8).is_zero()
        }
        even(&self.a) && even(&self.b) && even(&self.c) && even(&self.d)
    }

    /// Halve every component; callers must check `all_even` first.
    pub fn halve(&self) -> Self {
        OmegaInt {
            a: &self.a / 2,
            b: &self.b / 2,
            c: &self.c / 2,
            d: &self.d / 2,
        }
    }
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().expect("BigInt to f64")
}

impl Add for &OmegaInt {
    type Output = OmegaInt;
    fn add(self, rhs: &OmegaInt) -> OmegaInt {
        OmegaInt {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c,
            d: &self.d + &rhs.d,
        }
    }
}

impl Sub for &OmegaInt {
    type Output = OmegaInt;
    fn sub(self, rhs: &OmegaInt) -> OmegaInt {
        OmegaInt {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
            c: &self.c - &rhs.c,
            d: &self.d - &rhs.d,
        }
    }
}

impl Neg for &OmegaInt {
    type Output = OmegaInt;
    fn neg(self) -> OmegaInt {
        OmegaInt {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }
}

impl fmt::Display for OmegaInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*w3 + {}*w2 + {}*w + {}", self.a, self.b, self.c, self.d)
    }
}

/// An exact value p + q√2 with rational p, q. Closed under field operations;
/// ordering is decided exactly (no floating point).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootTwoRational {
    pub p: BigRational,
    pub q: BigRational,
}

impl RootTwoRational {
    pub fn new(p: BigRational, q: BigRational) -> Self {
        RootTwoRational { p, q }
    }

    pub fn zero() -> Self {
        RootTwoRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        RootTwoRational::new(BigRational::one(), BigRational::zero())
    }

    pub fn from_ints(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        RootTwoRational::new(
            BigRational::from_integer(p.into()),
            BigRational::from_integer(q.into()),
        )
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        RootTwoRational::new(BigRational::new(num.into(), den.into()), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Exact sign of p + q√2. The mixed-sign cases reduce to comparing
    /// p² against 2q²; equality there cannot occur for nonzero q because
    /// √2 is irrational.
    pub fn sign(&self) -> Ordering {
        if self.q.is_zero() {
            return sign_of(&self.p);
        }
        if self.p.is_zero() {
            return sign_of(&self.q);
        }
        match (self.p.is_positive(), self.q.is_positive()) {
            (true, true) => Ordering::Greater,
            (false, false) => Ordering::Less,
            (true, false) => {
                // p > 0, q < 0: sign of p − |q|√2, i.e. compare p² with 2q².
                cmp_sq(&self.p, &self.q)
            }
            (false, true) => cmp_sq(&self.p, &self.q).reverse(),
        }
    }

    pub fn recip(&self) -> Self {
        // 1/(p + q√2) = (p − q√2)/(p² − 2q²)
        let denom = &self.p * &self.p - BigRational::from_integer(BigInt::from(2)) * &self.q * &self.q;
        assert!(!denom.is_zero(), "division by zero in Q(sqrt 2)");
        RootTwoRational::new(&self.p / &denom, -&self.q / &denom)
    }

    /// Divide by √2^k (k halvings of the squared scale).
    pub fn div_sqrt2_pow(&self, k: u32) -> Self {
        let mut v = self.clone();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for _ in 0..k / 2 {
            v.p = &v.p * &half;
            v.q = &v.q * &half;
        }
        if k % 2 == 1 {
            // (p + q√2)/√2 = q + (p/2)√2
            let new_p = v.q.clone();
            let new_q = &v.p * &half;
            v = RootTwoRational::new(new_p, new_q);
        }
        v
    }

    pub fn to_f64(&self) -> f64 {
        self.p.to_f64().unwrap_or(f64::NAN) + self.q.to_f64().unwrap_or(f64::NAN) * SQRT_2
    }
}

fn sign_of(x: &BigRational) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

/// Compare p² with 2q², as the sign of |p| − |q|√2.
fn cmp_sq(p: &BigRational, q: &BigRational) -> Ordering {
    let lhs = p * p;
    let rhs = BigRational::from_integer(BigInt::from(2)) * q * q;
    lhs.cmp(&rhs)
}

impl Add for &RootTwoRational {
    type Output = RootTwoRational;
    fn add(self, rhs: &RootTwoRational) -> RootTwoRational {
        RootTwoRational::new(&self.p + &rhs.p, &self.q + &rhs.q)
    }
}

impl Sub for &RootTwoRational {
    type Output = RootTwoRational;
    fn sub(self, rhs: &RootTwoRational) -> RootTwoRational {
        RootTwoRational::new(&self.p - &rhs.p, &self.q - &rhs.q)
    }
}

impl Mul for &RootTwoRational {
    type Output = RootTwoRational;
    fn mul(self, rhs: &RootTwoRational) -> RootTwoRational {
        // (p1 + q1√2)(p2 + q2√2) = p1p2 + 2q1q2 + (p1q2 + q1p2)√2
        let two = BigRational::from_integer(BigInt::from(2));
        RootTwoRational::new(
            &self.p * &rhs.p + two * &self.q * &rhs.q,
            &self.p * &rhs.q + &self.q * &rhs.p,
        )
    }
}

impl Div for &RootTwoRational {
    type Output = RootTwoRational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RootTwoRational) -> RootTwoRational {
        self * &rhs.recip()
    }
}

impl Neg for &RootTwoRational {
    type Output = RootTwoRational;
    fn neg(self) -> RootTwoRational {
        RootTwoRational::new(-&self.p, -&self.q)
    }
}

impl PartialOrd for RootTwoRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootTwoRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Display for RootTwoRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else if self.p.is_zero() {
            write!(f, "{}*sqrt(2)", self.q)
        } else {
            write!(f, "{} + {}*sqrt(2)", self.p, self.q)
        }
    }
}

/// Float rendering with 15 significant digits; plain decimal inside a
/// comfortable exponent range, scientific outside it.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        // trim trailing zeros but keep at least one digit after the point
        if s.contains('.') {
            let t = s.trim_end_matches('0');
            let t = t.strip_suffix('.').unwrap_or(t);
            t.to_string()
        } else {
            s
        }
    } else {
        format!("{x:.14e}")
    }
}
