//! Commutative rings with a pseudoinvolution.
//!
//! A pseudoinvolution is an additive map `r ↦ r̄` with `r̄̄ = r` and
//! `bar(r s) = s̄ · 1̄⁻¹ · r̄`. Four carrier families are shipped (integers,
//! integers mod k, Gaussian integers, Gaussian integers mod k) together with
//! three maps: the identity (`1̄ = 1`), negation (`1̄ = −1`) and, on Gaussian
//! carriers only, `z ↦ i·conj(z)` (`1̄ = i`).
//!
//! Scalars are stored as a pair of arbitrary-precision integers in canonical
//! form, so equality of [`Scalar`]s is equality of ring elements.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::report::Report;

/// Half-width of the box used when sampling elements of an infinite carrier.
pub const SAMPLE_BOUND: i64 = 9;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Descriptor {
    Integer,
    Mod(BigInt),
    GaussInteger,
    GaussMod(BigInt),
}

impl Descriptor {
    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            Descriptor::Mod(k) | Descriptor::GaussMod(k) => Some(k),
            _ => None,
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self, Descriptor::GaussInteger | Descriptor::GaussMod(_))
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Descriptor::Integer => write!(f, "Z"),
            Descriptor::Mod(k) => write!(f, "Z/{k}"),
            Descriptor::GaussInteger => write!(f, "Z[i]"),
            Descriptor::GaussMod(k) => write!(f, "Z[i]/{k}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Involution {
    Identity,
    Negation,
    TwistI,
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Involution::Identity => "identity",
            Involution::Negation => "negation",
            Involution::TwistI => "twist_i",
        };
        f.write_str(s)
    }
}

/// An exact ring element. Non-Gaussian carriers keep `im = 0`; modular
/// carriers keep both components in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: BigInt,
    im: BigInt,
}

impl Scalar {
    pub fn re(&self) -> &BigInt {
        &self.re
    }

    pub fn im(&self) -> &BigInt {
        &self.im
    }
}

/// A commutative ring together with its pseudoinvolution.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    descriptor: Descriptor,
    involution: Involution,
}

/// Builds a ring, rejecting combinations on which the involution is undefined.
pub fn make_ring(descriptor: Descriptor, involution: Involution) -> Result<Ring> {
    if let Some(k) = descriptor.modulus() {
        if k < &BigInt::from(2) {
            return Err(Error::InvalidDescriptor(format!("modulus must be >= 2, got {k}")));
        }
    }
    if involution == Involution::TwistI && !descriptor.is_gaussian() {
        return Err(Error::IncompatibleInvolution {
            descriptor: descriptor.to_string(),
            involution: involution.to_string(),
        });
    }
    let ring = Ring { descriptor, involution };
    // bar(1) is ±1 or i for the shipped maps, always a unit; guarded anyway.
    ring.special_units()?;
    Ok(ring)
}

impl Ring {
    pub fn new(descriptor: Descriptor, involution: Involution) -> Result<Ring> {
        make_ring(descriptor, involution)
    }

    pub fn integers(involution: Involution) -> Result<Ring> {
        make_ring(Descriptor::Integer, involution)
    }

    pub fn modular(k: u64, involution: Involution) -> Result<Ring> {
        make_ring(Descriptor::Mod(BigInt::from(k)), involution)
    }

    pub fn gaussian(involution: Involution) -> Result<Ring> {
        make_ring(Descriptor::GaussInteger, involution)
    }

    pub fn gaussian_mod(k: u64, involution: Involution) -> Result<Ring> {
        make_ring(Descriptor::GaussMod(BigInt::from(k)), involution)
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn involution(&self) -> Involution {
        self.involution
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        self.descriptor.modulus()
    }

    pub fn is_gaussian(&self) -> bool {
        self.descriptor.is_gaussian()
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    /// Number of elements, `None` for infinite carriers.
    pub fn cardinality(&self) -> Option<BigInt> {
        match &self.descriptor {
            Descriptor::Mod(k) => Some(k.clone()),
            Descriptor::GaussMod(k) => Some(k * k),
            _ => None,
        }
    }

    fn reduce_component(&self, x: BigInt) -> BigInt {
        match self.modulus() {
            Some(k) => x.mod_floor(k),
            None => x,
        }
    }

    fn make(&self, re: BigInt, im: BigInt) -> Scalar {
        let im = if self.is_gaussian() { im } else { BigInt::zero() };
        Scalar {
            re: self.reduce_component(re),
            im: self.reduce_component(im),
        }
    }

    /// Element from components; the imaginary part must be zero on
    /// non-Gaussian carriers.
    pub fn element(&self, re: impl Into<BigInt>, im: impl Into<BigInt>) -> Result<Scalar> {
        let im = im.into();
        if !self.is_gaussian() && !im.is_zero() {
            return Err(Error::Parse(format!("{} has no imaginary unit", self.descriptor)));
        }
        Ok(self.make(re.into(), im))
    }

    pub fn int(&self, n: i64) -> Scalar {
        self.make(BigInt::from(n), BigInt::zero())
    }

    pub fn from_bigint(&self, n: BigInt) -> Scalar {
        self.make(n, BigInt::zero())
    }

    pub fn zero(&self) -> Scalar {
        self.int(0)
    }

    pub fn one(&self) -> Scalar {
        self.int(1)
    }

    /// The imaginary unit on Gaussian carriers.
    pub fn i_unit(&self) -> Option<Scalar> {
        self.is_gaussian().then(|| self.make(BigInt::zero(), BigInt::one()))
    }

    /// True when `x` is in canonical form for this ring.
    pub fn contains(&self, x: &Scalar) -> bool {
        self.make(x.re.clone(), x.im.clone()) == *x && (self.is_gaussian() || x.im.is_zero())
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        x.re.is_zero() && x.im.is_zero()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.make(&a.re + &b.re, &a.im + &b.im)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.make(&a.re - &b.re, &a.im - &b.im)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.make(-&a.re, -&a.im)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if self.is_gaussian() {
            self.make(&a.re * &b.re - &a.im * &b.im, &a.re * &b.im + &a.im * &b.re)
        } else {
            self.make(&a.re * &b.re, BigInt::zero())
        }
    }

    /// Product of several factors, left to right.
    pub fn product<'a>(&self, factors: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
        factors.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    pub fn sum<'a>(&self, terms: impl IntoIterator<Item = &'a Scalar>) -> Scalar {
        terms.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Multiplication by an integer (repeated addition).
    pub fn times(&self, n: i64, a: &Scalar) -> Scalar {
        self.make(&a.re * n, &a.im * n)
    }

    /// The pseudoinvolution `σ(x)`.
    pub fn bar(&self, x: &Scalar) -> Scalar {
        match self.involution {
            Involution::Identity => x.clone(),
            Involution::Negation => self.neg(x),
            // i·conj(a + bi) = i·(a − bi) = b + ai
            Involution::TwistI => self.make(x.im.clone(), x.re.clone()),
        }
    }

    /// Multiplicative inverse, `None` when `x` is not a unit.
    pub fn inverse(&self, x: &Scalar) -> Option<Scalar> {
        match &self.descriptor {
            Descriptor::Integer => {
                (x.re.abs().is_one()).then(|| x.clone())
            }
            Descriptor::Mod(k) => mod_inverse(&x.re, k).map(|r| self.from_bigint(r)),
            Descriptor::GaussInteger => {
                let norm = &x.re * &x.re + &x.im * &x.im;
                norm.is_one().then(|| self.make(x.re.clone(), -&x.im))
            }
            Descriptor::GaussMod(k) => {
                let norm = (&x.re * &x.re + &x.im * &x.im).mod_floor(k);
                let ninv = mod_inverse(&norm, k)?;
                Some(self.make(&x.re * &ninv, -&x.im * &ninv))
            }
        }
    }

    pub fn is_unit(&self, x: &Scalar) -> bool {
        self.inverse(x).is_some()
    }

    /// `1̄ = σ(1)`.
    pub fn bar_one(&self) -> Scalar {
        self.bar(&self.one())
    }

    /// `1̄⁻¹`. Every shipped instance has `1̄` a unit, enforced by [`make_ring`].
    pub fn bar_one_inv(&self) -> Scalar {
        self.inverse(&self.bar_one())
            .expect("bar(1) is a unit for every constructed ring")
    }

    /// Returns `(1̄, 1̄⁻¹)`.
    pub fn special_units(&self) -> Result<(Scalar, Scalar)> {
        let b = self.bar_one();
        match self.inverse(&b) {
            Some(inv) => Ok((b, inv)),
            None => Err(Error::NotAUnit(self.format(&b))),
        }
    }

    /// Additive generators of the carrier: `{1}` or `{1, i}`.
    pub fn additive_generators(&self) -> Vec<Scalar> {
        let mut gens = vec![self.one()];
        gens.extend(self.i_unit());
        gens
    }

    /// All elements of a finite carrier, in a fixed order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        let k = self.modulus()?.to_i64()?;
        let ims = if self.is_gaussian() { k } else { 1 };
        let mut out = Vec::with_capacity((k * ims) as usize);
        for re in 0..k {
            for im in 0..ims {
                out.push(self.make(BigInt::from(re), BigInt::from(im)));
            }
        }
        Some(out)
    }

    fn sample_component<R: Rng + ?Sized>(&self, rng: &mut R) -> BigInt {
        match self.modulus().and_then(|k| k.to_u64()) {
            Some(k) => BigInt::from(rng.gen_range(0..k)),
            None => match self.modulus() {
                Some(k) => BigInt::from(rng.gen::<u64>()).mod_floor(k),
                None => BigInt::from(rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)),
            },
        }
    }

    /// Uniform element of a finite carrier; uniform in a small box otherwise.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        let re = self.sample_component(rng);
        let im = if self.is_gaussian() {
            self.sample_component(rng)
        } else {
            BigInt::zero()
        };
        self.make(re, im)
    }

    /// Solves `c·x = t` componentwise over the base integers or residues.
    fn solve_component(&self, c: i64, t: &BigInt) -> Option<BigInt> {
        let c = BigInt::from(c);
        match self.modulus() {
            None => t.is_multiple_of(&c).then(|| t / &c),
            Some(k) => {
                let g = c.gcd(k);
                if !t.is_multiple_of(&g) {
                    return None;
                }
                let k_red = k / &g;
                let inv = mod_inverse(&(&c / &g), &k_red)?;
                Some(((t / &g) * inv).mod_floor(&k_red))
            }
        }
    }

    /// Finds `a` with `bar(a) − a = t`, if one exists.
    pub fn solve_bar_difference(&self, t: &Scalar) -> Option<Scalar> {
        match self.involution {
            Involution::Identity => self.is_zero(t).then(|| self.zero()),
            // −2a = t
            Involution::Negation => {
                let nt = self.neg(t);
                let re = self.solve_component(2, &nt.re)?;
                let im = self.solve_component(2, &nt.im)?;
                Some(self.make(re, im))
            }
            // a = x + yi gives bar(a) − a = (y − x)(1 − i)
            Involution::TwistI => {
                (self.add(&t.re_part(self), &t.im_part(self)) == self.zero())
                    .then(|| self.make(BigInt::zero(), t.re.clone()))
            }
        }
    }

    /// Finds `r` with `r + bar(r) = t`, if one exists.
    pub fn solve_trace_form(&self, t: &Scalar) -> Option<Scalar> {
        match self.involution {
            Involution::Identity => {
                let re = self.solve_component(2, &t.re)?;
                let im = self.solve_component(2, &t.im)?;
                Some(self.make(re, im))
            }
            Involution::Negation => self.is_zero(t).then(|| self.zero()),
            // r = x + yi gives r + bar(r) = (x + y)(1 + i)
            Involution::TwistI => (t.re == t.im).then(|| self.make(t.re.clone(), BigInt::zero())),
        }
    }

    /// Canonical text form: `7`, or `a+bi` / `a-bi` on Gaussian carriers.
    pub fn format(&self, x: &Scalar) -> String {
        if self.is_gaussian() {
            if x.im.is_negative() {
                format!("{}-{}i", x.re, -&x.im)
            } else {
                format!("{}+{}i", x.re, x.im)
            }
        } else {
            x.re.to_string()
        }
    }

    /// Parses the forms produced by [`Ring::format`], plus `bi`, `i`, `-i`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("cannot parse scalar {s:?} in {}", self.descriptor));
        if s.is_empty() {
            return Err(bad());
        }
        let Some(body) = s.strip_suffix('i') else {
            let re: BigInt = s.parse().map_err(|_| bad())?;
            return Ok(self.make(re, BigInt::zero()));
        };
        if !self.is_gaussian() {
            return Err(bad());
        }
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (re_txt, im_txt) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let re: BigInt = re_txt.parse().map_err(|_| bad())?;
        let im: BigInt = match im_txt {
            "" | "+" => BigInt::one(),
            "-" => -BigInt::one(),
            t => t.trim_start_matches('+').parse().map_err(|_| bad())?,
        };
        Ok(self.make(re, im))
    }

    /// JSON form: a number (or decimal string when it exceeds i64) on
    /// non-Gaussian carriers, `[re, im]` on Gaussian ones.
    pub fn scalar_to_json(&self, x: &Scalar) -> Value {
        fn component(n: &BigInt) -> Value {
            match n.to_i64() {
                Some(v) => Value::from(v),
                None => Value::from(n.to_string()),
            }
        }
        if self.is_gaussian() {
            Value::Array(vec![component(&x.re), component(&x.im)])
        } else {
            component(&x.re)
        }
    }

    pub fn scalar_from_json(&self, v: &Value) -> Result<Scalar> {
        fn component(v: &Value) -> Result<BigInt> {
            match v {
                Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| Error::Parse(format!("non-integer scalar {n}"))),
                Value::String(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad integer {s:?}"))),
                other => Err(Error::Parse(format!("expected integer, got {other}"))),
            }
        }
        match v {
            Value::Array(parts) if self.is_gaussian() && parts.len() == 2 => {
                Ok(self.make(component(&parts[0])?, component(&parts[1])?))
            }
            Value::Array(_) => Err(Error::Parse(format!(
                "scalar {v} does not fit {}",
                self.descriptor
            ))),
            Value::String(s) if self.is_gaussian() => self.parse(s),
            _ => Ok(self.make(component(v)?, BigInt::zero())),
        }
    }
}

impl Scalar {
    fn re_part(&self, ring: &Ring) -> Scalar {
        ring.make(self.re.clone(), BigInt::zero())
    }

    fn im_part(&self, ring: &Ring) -> Scalar {
        ring.make(self.im.clone(), BigInt::zero())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.descriptor, self.involution)
    }
}

fn mod_inverse(a: &BigInt, k: &BigInt) -> Option<BigInt> {
    if k.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.mod_floor(k).extended_gcd(k);
    e.gcd.is_one().then(|| e.x.mod_floor(k))
}

#[derive(Serialize, Deserialize)]
struct RingWire {
    descriptor: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<u64>,
    involution: Involution,
}

impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (descriptor, k) = match &self.descriptor {
            Descriptor::Integer => ("integer", None),
            Descriptor::Mod(k) => ("mod", k.to_u64()),
            Descriptor::GaussInteger => ("gauss", None),
            Descriptor::GaussMod(k) => ("gauss_mod", k.to_u64()),
        };
        RingWire {
            descriptor: descriptor.to_string(),
            k,
            involution: self.involution,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = RingWire::deserialize(d)?;
        let modulus = || {
            wire.k
                .map(BigInt::from)
                .ok_or_else(|| D::Error::custom("modular descriptor needs \"k\""))
        };
        let descriptor = match wire.descriptor.as_str() {
            "integer" => Descriptor::Integer,
            "mod" => Descriptor::Mod(modulus()?),
            "gauss" => Descriptor::GaussInteger,
            "gauss_mod" => Descriptor::GaussMod(modulus()?),
            other => return Err(D::Error::custom(format!("unknown descriptor {other:?}"))),
        };
        make_ring(descriptor, wire.involution).map_err(D::Error::custom)
    }
}

/// Checks the pseudoinvolution axioms of the ring's own `bar`.
pub fn check_pseudoinvolution(ring: &Ring, sample_budget: usize) -> Report {
    check_pseudoinvolution_with(ring, sample_budget, |x| ring.bar(x))
}

/// Checks the pseudoinvolution axioms for an arbitrary candidate map.
///
/// Finite carriers with at most `sample_budget` elements are checked on every
/// pair; otherwise `sample_budget` pairs are drawn with a fixed seed.
pub fn check_pseudoinvolution_with<F>(ring: &Ring, sample_budget: usize, bar: F) -> Report
where
    F: Fn(&Scalar) -> Scalar,
{
    use rand::SeedableRng;

    let budget = sample_budget.max(1);
    let pairs: Vec<(Scalar, Scalar)> = match ring.elements() {
        Some(all) if all.len() <= budget => all
            .iter()
            .flat_map(|a| all.iter().map(move |b| (a.clone(), b.clone())))
            .collect(),
        _ => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
            (0..budget)
                .map(|_| (ring.sample(&mut rng), ring.sample(&mut rng)))
                .collect()
        }
    };
    let show = |a: &Scalar, b: &Scalar| format!("a={}, b={}", ring.format(a), ring.format(b));

    let mut report = Report::new(format!("pseudoinvolution axioms on {ring}"));
    let bar_one = bar(&ring.one());
    let bar_one_inv = ring.inverse(&bar_one);
    report.push(
        "bar(1) is a unit",
        bar_one_inv.is_some(),
        bar_one_inv.is_none().then(|| format!("bar(1)={}", ring.format(&bar_one))),
    );

    let additive = pairs
        .iter()
        .find(|(a, b)| bar(&ring.add(a, b)) != ring.add(&bar(a), &bar(b)));
    report.push("additive", additive.is_none(), additive.map(|(a, b)| show(a, b)));

    let involutive = pairs.iter().map(|(a, _)| a).find(|a| bar(&bar(a)) != **a);
    report.push(
        "involutive",
        involutive.is_none(),
        involutive.map(|a| format!("a={}", ring.format(a))),
    );

    match &bar_one_inv {
        Some(inv) => {
            let twisted = pairs.iter().find(|(a, b)| {
                bar(&ring.mul(a, b)) != ring.product([&bar(b), inv, &bar(a)])
            });
            report.push("twisted multiplicative", twisted.is_none(), twisted.map(|(a, b)| show(a, b)));
            let note = ring.mul(&bar_one, &bar_one) == bar(inv);
            report.push(
                "bar(1)*bar(1) = bar(bar(1)^-1)",
                note,
                (!note).then(|| format!("bar(1)={}", ring.format(&bar_one))),
            );
        }
        None => {
            report.push("twisted multiplicative", false, Some("bar(1) not invertible".into()));
            report.push("bar(1)*bar(1) = bar(bar(1)^-1)", false, Some("bar(1) not invertible".into()));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gm(k: u64) -> Ring {
        Ring::gaussian_mod(k, Involution::TwistI).unwrap()
    }

    #[test]
    fn twist_requires_gaussian_carrier() {
        let err = Ring::integers(Involution::TwistI).unwrap_err();
        assert!(matches!(err, Error::IncompatibleInvolution { .. }));
        assert!(Ring::modular(5, Involution::TwistI).is_err());
        assert!(Ring::modular(1, Involution::Identity).is_err());
    }

    #[test]
    fn negation_on_integers() {
        let r = Ring::integers(Involution::Negation).unwrap();
        assert_eq!(r.bar(&r.int(3)), r.int(-3));
        assert_eq!(r.special_units().unwrap(), (r.int(-1), r.int(-1)));
    }

    #[test]
    fn identity_mod_five() {
        let r = Ring::modular(5, Involution::Identity).unwrap();
        assert_eq!(r.bar(&r.int(3)), r.int(3));
        assert_eq!(r.special_units().unwrap(), (r.one(), r.one()));
        assert_eq!(r.mul(&r.int(2), &r.int(3)), r.one());
    }

    #[test]
    fn twist_special_units() {
        let r = gm(3);
        let i = r.i_unit().unwrap();
        assert_eq!(r.bar(&r.one()), i);
        let (b, binv) = gm(5).special_units().unwrap();
        let r5 = gm(5);
        assert_eq!(b, r5.i_unit().unwrap());
        assert_eq!(binv, r5.neg(&r5.i_unit().unwrap()));
        // 1̄·1̄ = −1 = bar(−i)
        assert_eq!(r5.mul(&b, &b), r5.int(-1));
        assert_eq!(r5.bar(&binv), r5.int(-1));
        // (1̄⁻¹)² = −1 ≠ 1
        assert_ne!(r5.mul(&binv, &binv), r5.one());
    }

    #[test]
    fn twist_axioms_exhaustive_over_all_81_pairs() {
        let r = gm(3);
        let all = r.elements().unwrap();
        assert_eq!(all.len(), 9);
        let binv = r.bar_one_inv();
        for a in &all {
            assert_eq!(r.bar(&r.bar(a)), *a);
            for b in &all {
                assert_eq!(r.bar(&r.mul(a, b)), r.product([&r.bar(b), &binv, &r.bar(a)]));
            }
        }
        assert!(check_pseudoinvolution(&r, 100).all_passed());
    }

    #[test]
    fn negation_budget_check_passes() {
        let r = Ring::integers(Involution::Negation).unwrap();
        assert!(check_pseudoinvolution(&r, 100).all_passed());
    }

    #[test]
    fn broken_involution_reports_additivity_witness() {
        let r = gm(3);
        let bad = |x: &Scalar| {
            let conj = r.element(x.re().clone(), -x.im().clone()).unwrap();
            r.add(&conj, &r.one())
        };
        let report = check_pseudoinvolution_with(&r, 100, bad);
        let add = report.get("additive").unwrap();
        assert!(!add.passed);
        assert!(add.detail.is_some());
    }

    #[test]
    fn inverses() {
        let r = Ring::modular(6, Involution::Identity).unwrap();
        assert_eq!(r.inverse(&r.int(5)), Some(r.int(5)));
        assert_eq!(r.inverse(&r.int(2)), None);
        let g = gm(3);
        for x in g.elements().unwrap() {
            if let Some(y) = g.inverse(&x) {
                assert_eq!(g.mul(&x, &y), g.one());
            }
        }
        let z = Ring::gaussian(Involution::Negation).unwrap();
        let i = z.i_unit().unwrap();
        assert_eq!(z.mul(&i, &z.inverse(&i).unwrap()), z.one());
        assert_eq!(z.inverse(&z.int(2)), None);
    }

    #[test]
    fn solvers_match_exhaustive_search() {
        for ring in [
            Ring::modular(5, Involution::Negation).unwrap(),
            Ring::modular(6, Involution::Negation).unwrap(),
            Ring::modular(4, Involution::Identity).unwrap(),
            gm(3),
            gm(4),
            Ring::gaussian_mod(5, Involution::Negation).unwrap(),
            Ring::gaussian_mod(3, Involution::Identity).unwrap(),
        ] {
            let all = ring.elements().unwrap();
            for t in &all {
                let diff_exists = all.iter().any(|a| ring.sub(&ring.bar(a), a) == *t);
                match ring.solve_bar_difference(t) {
                    Some(a) => assert_eq!(ring.sub(&ring.bar(&a), &a), *t),
                    None => assert!(!diff_exists, "{ring}: missed {}", ring.format(t)),
                }
                let trace_exists = all.iter().any(|a| ring.add(a, &ring.bar(a)) == *t);
                match ring.solve_trace_form(t) {
                    Some(a) => assert_eq!(ring.add(&a, &ring.bar(&a)), *t),
                    None => assert!(!trace_exists, "{ring}: missed {}", ring.format(t)),
                }
            }
        }
    }

    #[test]
    fn integer_solvers() {
        let r = Ring::integers(Involution::Identity).unwrap();
        assert_eq!(r.solve_trace_form(&r.int(1)), None);
        assert_eq!(r.solve_trace_form(&r.int(6)), Some(r.int(3)));
        let n = Ring::integers(Involution::Negation).unwrap();
        assert_eq!(n.solve_bar_difference(&n.int(4)), Some(n.int(-2)));
        assert_eq!(n.solve_bar_difference(&n.int(3)), None);
    }

    #[test]
    fn format_and_parse() {
        let g = Ring::gaussian(Involution::TwistI).unwrap();
        let x = g.element(3, -2).unwrap();
        assert_eq!(g.format(&x), "3-2i");
        assert_eq!(g.parse("3-2i").unwrap(), x);
        assert_eq!(g.parse("-i").unwrap(), g.element(0, -1).unwrap());
        assert_eq!(g.parse("4").unwrap(), g.int(4));
        assert!(Ring::integers(Involution::Identity).unwrap().parse("2i").is_err());
        let m = Ring::modular(5, Involution::Negation).unwrap();
        assert_eq!(m.parse("-1").unwrap(), m.int(4));
    }

    #[test]
    fn ring_json() {
        let r = Ring::modular(5, Involution::Negation).unwrap();
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, r#"{"descriptor":"mod","k":5,"involution":"negation"}"#);
        let back: Ring = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
        let bad = serde_json::from_str::<Ring>(r#"{"descriptor":"integer","involution":"twist_i"}"#);
        assert!(bad.is_err());
        let g = gm(3);
        let x = g.element(1, 2).unwrap();
        assert_eq!(g.scalar_to_json(&x), serde_json::json!([1, 2]));
        assert_eq!(g.scalar_from_json(&serde_json::json!([1, 2])).unwrap(), x);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn rings() -> Vec<Ring> {
            vec![
                Ring::integers(Involution::Negation).unwrap(),
                Ring::integers(Involution::Identity).unwrap(),
                Ring::modular(7, Involution::Negation).unwrap(),
                Ring::gaussian(Involution::TwistI).unwrap(),
                Ring::gaussian_mod(5, Involution::TwistI).unwrap(),
                Ring::gaussian_mod(9, Involution::Negation).unwrap(),
            ]
        }

        proptest! {
            #[test]
            fn parse_print_round_trip(idx in 0usize..6, re in -10_000i64..10_000, im in -10_000i64..10_000) {
                let ring = &rings()[idx];
                let im = if ring.is_gaussian() { im } else { 0 };
                let x = ring.element(re, im).unwrap();
                prop_assert_eq!(ring.parse(&ring.format(&x)).unwrap(), x.clone());
                prop_assert_eq!(ring.scalar_from_json(&ring.scalar_to_json(&x)).unwrap(), x);
            }

            #[test]
            fn axioms_on_samples(idx in 0usize..6, a in (-50i64..50, -50i64..50), b in (-50i64..50, -50i64..50)) {
                let ring = &rings()[idx];
                let g = ring.is_gaussian();
                let a = ring.element(a.0, if g { a.1 } else { 0 }).unwrap();
                let b = ring.element(b.0, if g { b.1 } else { 0 }).unwrap();
                let binv = ring.bar_one_inv();
                prop_assert_eq!(ring.bar(&ring.add(&a, &b)), ring.add(&ring.bar(&a), &ring.bar(&b)));
                prop_assert_eq!(ring.bar(&ring.bar(&a)), a.clone());
                prop_assert_eq!(ring.bar(&ring.mul(&a, &b)), ring.product([&ring.bar(&b), &binv, &ring.bar(&a)]));
                let bo = ring.bar_one();
                prop_assert_eq!(ring.mul(&bo, &bo), ring.bar(&binv));
            }
        }
    }
}
