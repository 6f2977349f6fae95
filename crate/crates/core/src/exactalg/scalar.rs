use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::AlgError;

/// Name of the transcendental parameter of `F_p(s)`.
pub const PARAM: &str = "s";

/// Ground field of a session. Elements of different fields never mix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
    /// `F_p(s)`, fractions of polynomials in the single parameter `s`.
    RationalFunction(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, AlgError> {
        if !is_prime(p) {
            return Err(AlgError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn rational_function(p: u64) -> Result<Field, AlgError> {
        if !is_prime(p) {
            return Err(AlgError::NotPrime(p));
        }
        Ok(Field::RationalFunction(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) | Field::RationalFunction(p) => *p,
        }
    }

    /// Perfect fields: `Q` and finite fields. `F_p(s)` is not perfect (`s` has no p-th root).
    pub fn is_perfect(&self) -> bool {
        !matches!(self, Field::RationalFunction(_))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                v: reduce_i128(n as i128, *p),
                p: *p,
            },
            Field::RationalFunction(p) => {
                Scalar::Fs(RatFn::constant(*p, reduce_i128(n as i128, *p)))
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(n.clone())),
            Field::Prime(p) | Field::RationalFunction(p) => {
                let r = n.mod_floor(&BigInt::from(*p)).to_u64().unwrap();
                match self {
                    Field::Prime(_) => Scalar::Fp { v: r, p: *p },
                    _ => Scalar::Fs(RatFn::constant(*p, r)),
                }
            }
        }
    }

    /// The parameter `s` of `F_p(s)`; `None` for other fields.
    pub fn param(&self) -> Option<Scalar> {
        match self {
            Field::RationalFunction(p) => Some(Scalar::Fs(RatFn {
                p: *p,
                num: vec![0, 1],
                den: vec![1],
            })),
            _ => None,
        }
    }

    pub fn contains(&self, s: &Scalar) -> bool {
        matches!(
            (self, s),
            (Field::Rational, Scalar::Q(_))
                | (Field::Prime(_), Scalar::Fp { .. })
                | (Field::RationalFunction(_), Scalar::Fs(_))
        ) && self.characteristic() == s.characteristic()
    }

    pub fn describe(&self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("F_{p}"),
            Field::RationalFunction(p) => format!("F_{p}({PARAM})"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if !(2..=(1 << 31)).contains(&p) {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce_i128(n: i128, p: u64) -> u64 {
    n.rem_euclid(p as i128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    debug_assert_eq!(r0, 1);
    t0.rem_euclid(p as i128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Dense univariate polynomials over `F_p`, little-endian, no trailing zeros.
mod upoly {
    use super::{inv_mod, mul_mod};

    pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(out)
    }

    pub fn neg(a: &[u64], p: u64) -> Vec<u64> {
        a.iter().map(|&c| (p - c) % p).collect()
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
            }
        }
        trim(out)
    }

    pub fn scale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
        trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + db], lead_inv, p);
            q[k] = c;
            if c != 0 {
                for (j, &y) in b.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mul_mod(c, y, p)) % p;
                }
            }
        }
        (trim(q), trim(r))
    }

    pub fn monic(a: &[u64], p: u64) -> Vec<u64> {
        match a.last() {
            None => Vec::new(),
            Some(&l) => scale(a, inv_mod(l, p), p),
        }
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        while !y.is_empty() {
            let (_, r) = divrem(&x, &y, p);
            x = y;
            y = r;
        }
        monic(&x, p)
    }
}

/// Element of `F_p(s)`: reduced fraction with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    p: u64,
    num: Vec<u64>,
    den: Vec<u64>,
}

impl RatFn {
    fn constant(p: u64, c: u64) -> RatFn {
        RatFn {
            p,
            num: upoly::trim(vec![c % p]),
            den: vec![1],
        }
    }

    fn new(p: u64, num: Vec<u64>, den: Vec<u64>) -> RatFn {
        assert!(!den.is_empty(), "zero denominator in F_p(s)");
        if num.is_empty() {
            return RatFn {
                p,
                num,
                den: vec![1],
            };
        }
        let g = upoly::gcd(&num, &den, p);
        let (n, _) = upoly::divrem(&num, &g, p);
        let (d, _) = upoly::divrem(&den, &g, p);
        let lc_inv = inv_mod(*d.last().unwrap(), p);
        RatFn {
            p,
            num: upoly::scale(&n, lc_inv, p),
            den: upoly::scale(&d, lc_inv, p),
        }
    }

    pub fn numerator(&self) -> &[u64] {
        &self.num
    }

    pub fn denominator(&self) -> &[u64] {
        &self.den
    }
}

/// Exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
    Fs(RatFn),
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!(
        "characteristic mismatch: cannot combine {} (char {}) with {} (char {})",
        a,
        a.characteristic(),
        b,
        b.characteristic()
    )
}

impl Scalar {
    pub fn characteristic(&self) -> u64 {
        match self {
            Scalar::Q(_) => 0,
            Scalar::Fp { p, .. } => *p,
            Scalar::Fs(r) => r.p,
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
            Scalar::Fs(r) => Field::RationalFunction(r.p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
            Scalar::Fs(r) => r.num.is_empty(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
            Scalar::Fs(r) => r.num == [1] && r.den == [1],
        }
    }

    pub fn try_add(&self, o: &Scalar) -> Result<Scalar, AlgError> {
        self.same(o)?;
        Ok(self.add_unchecked(o))
    }

    fn same(&self, o: &Scalar) -> Result<(), AlgError> {
        let ok = matches!(
            (self, o),
            (Scalar::Q(_), Scalar::Q(_))
                | (Scalar::Fp { .. }, Scalar::Fp { .. })
                | (Scalar::Fs(_), Scalar::Fs(_))
        ) && self.characteristic() == o.characteristic();
        if ok {
            Ok(())
        } else {
            Err(AlgError::CharacteristicMismatch(
                self.characteristic(),
                o.characteristic(),
            ))
        }
    }

    fn add_unchecked(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) if a.is_integer() && b.is_integer() => {
                Scalar::Q(BigRational::from_integer(a.numer() + b.numer()))
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: (a + b) % p,
                p: *p,
            },
            (Scalar::Fs(a), Scalar::Fs(b)) => {
                let p = a.p;
                if a.den == b.den {
                    return Scalar::Fs(RatFn::new(p, upoly::add(&a.num, &b.num, p), a.den.clone()));
                }
                let n = upoly::add(
                    &upoly::mul(&a.num, &b.den, p),
                    &upoly::mul(&b.num, &a.den, p),
                    p,
                );
                Scalar::Fs(RatFn::new(p, n, upoly::mul(&a.den, &b.den, p)))
            }
            _ => mismatch(self, o),
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.same(o).is_err() {
            mismatch(self, o)
        }
        self.add_unchecked(o)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: (p - v) % p,
                p: *p,
            },
            Scalar::Fs(r) => Scalar::Fs(RatFn {
                p: r.p,
                num: upoly::neg(&r.num, r.p),
                den: r.den.clone(),
            }),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) if a.is_integer() && b.is_integer() => {
                Scalar::Q(BigRational::from_integer(a.numer() * b.numer()))
            }
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, p: q }) if p == q => Scalar::Fp {
                v: mul_mod(*a, *b, *p),
                p: *p,
            },
            (Scalar::Fs(a), Scalar::Fs(b)) if a.p == b.p => {
                let p = a.p;
                Scalar::Fs(RatFn::new(
                    p,
                    upoly::mul(&a.num, &b.num, p),
                    upoly::mul(&a.den, &b.den, p),
                ))
            }
            _ => mismatch(self, o),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(a) => Scalar::Q(a.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: inv_mod(*v, *p),
                p: *p,
            },
            Scalar::Fs(r) => Scalar::Fs(RatFn::new(r.p, r.den.clone(), r.num.clone())),
        })
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Sign heuristic used only for printing: negative rationals, residues above p/2,
    /// rational functions whose numerator has a leading coefficient above p/2.
    pub fn looks_negative(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_negative(),
            Scalar::Fp { v, p } => *v > p / 2,
            Scalar::Fs(r) => r.num.last().is_some_and(|&c| c > r.p / 2),
        }
    }

    /// True when printing needs parentheses inside a product.
    pub fn is_compound(&self) -> bool {
        match self {
            Scalar::Q(_) | Scalar::Fp { .. } => false,
            Scalar::Fs(r) => r.den != [1] || r.num.iter().filter(|&&c| c != 0).count() > 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Q(q) => Some(q),
            _ => None,
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::add(self, o)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::sub(self, o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::mul(self, o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

fn fmt_upoly(a: &[u64], p: u64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if a.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let neg = c > p / 2;
        let mag = if neg { p - c } else { c };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        match (i, mag) {
            (0, m) => write!(f, "{m}")?,
            (1, 1) => write!(f, "{PARAM}")?,
            (1, m) => write!(f, "{m}*{PARAM}")?,
            (k, 1) => write!(f, "{PARAM}^{k}")?,
            (k, m) => write!(f, "{m}*{PARAM}^{k}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
            Scalar::Fs(r) => {
                if r.den == [1] {
                    fmt_upoly(&r.num, r.p, f)
                } else {
                    write!(f, "(")?;
                    fmt_upoly(&r.num, r.p, f)?;
                    write!(f, ")/(")?;
                    fmt_upoly(&r.den, r.p, f)?;
                    write!(f, ")")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prime_field_inverse() {
        let f = Field::prime(7).unwrap();
        for n in 1..7 {
            let a = f.from_i64(n);
            assert!(a.mul(&a.inv().unwrap()).is_one());
        }
        assert!(f.from_i64(7).is_zero());
        assert!(Field::prime(9).is_err());
    }

    #[test]
    fn rational_function_reduces() {
        let f = Field::rational_function(3).unwrap();
        let s = f.param().unwrap();
        // (s^2 - 1)/(s - 1) = s + 1
        let num = s.mul(&s).sub(&f.one());
        let den = s.sub(&f.one());
        let q = num.div(&den).unwrap();
        assert_eq!(q, s.add(&f.one()));
        assert_eq!(q.to_string(), "s + 1");
        assert_eq!(s.neg().to_string(), "-s");
        assert!(!f.is_perfect());
    }

    #[test]
    fn frobenius_kills_p() {
        let f = Field::prime(5).unwrap();
        assert!(f.from_i64(5).is_zero());
        let q = Field::Rational;
        assert!(!q.from_i64(5).is_zero());
    }

    #[test]
    #[should_panic(expected = "characteristic mismatch")]
    fn mixing_characteristics_panics() {
        let a = Field::Rational.one();
        let b = Field::Prime(3).one();
        let _ = a.add(&b);
    }

    #[test]
    fn try_add_reports_mismatch() {
        let a = Field::Prime(5).one();
        let b = Field::Prime(3).one();
        assert!(matches!(
            a.try_add(&b),
            Err(AlgError::CharacteristicMismatch(5, 3))
        ));
    }

    fn ratfn(p: u64) -> impl Strategy<Value = Scalar> {
        (
            prop::collection::vec(0..p, 0..4),
            prop::collection::vec(0..p, 1..4),
        )
            .prop_filter_map("nonzero denominator", move |(n, d)| {
                let d = upoly::trim(d);
                if d.is_empty() {
                    return None;
                }
                Some(Scalar::Fs(RatFn::new(p, upoly::trim(n), d)))
            })
    }

    proptest! {
        #[test]
        fn rational_ops_match_num_rational(an in -50i64..50, ad in 1i64..4, bn in -50i64..50, bd in 1i64..4) {
            let (a, b) = (BigRational::new(an.into(), ad.into()), BigRational::new(bn.into(), bd.into()));
            let (x, y) = (Scalar::Q(a.clone()), Scalar::Q(b.clone()));
            prop_assert_eq!(x.add(&y), Scalar::Q(&a + &b));
            prop_assert_eq!(x.mul(&y), Scalar::Q(&a * &b));
            prop_assert_eq!(x.sub(&y), Scalar::Q(&a - &b));
        }

        #[test]
        fn ratfn_field_axioms(a in ratfn(3), b in ratfn(3), c in ratfn(3)) {
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b).sub(&b), a.clone());
            if !a.is_zero() {
                prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            }
        }

        #[test]
        fn prime_field_distributes(a in 0u64..11, b in 0u64..11, c in 0u64..11) {
            let f = Field::Prime(11);
            let (a, b, c) = (f.from_i64(a as i64), f.from_i64(b as i64), f.from_i64(c as i64));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }
    }
}
