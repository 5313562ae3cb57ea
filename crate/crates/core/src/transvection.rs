//! Eichler–Siegel–Dickson transvections, root transvections, the explicit
//! `T₁` / `T₋₁` matrices, and the isometry and congruence deciders.

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{vector_from_json, vector_to_json, Matrix};
use crate::ring::{Ring, Scalar};
use crate::space::{BasisLabel, BasisOrder, HeisElem, SpaceConfig};

/// `ε_i`: `1̄⁻¹` for `i > 0`, `−1` for `i < 0`.
pub fn epsilon(ring: &Ring, i: i64) -> Result<Scalar> {
    match i.signum() {
        1 => Ok(ring.bar_one_inv()),
        -1 => Ok(ring.int(-1)),
        _ => Err(Error::BadIndex("epsilon index must be nonzero".into())),
    }
}

fn check_dim(cfg: &SpaceConfig, x: &[Scalar]) -> Result<()> {
    if x.len() != cfg.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} in a space of dimension {}",
            x.len(),
            cfg.dim()
        )));
    }
    Ok(())
}

/// Row vector `j ↦ ⟨x, b_j⟩` for the Gram matrix `gram`.
fn pairing_row(cfg: &SpaceConfig, gram: &Matrix, x: &[Scalar]) -> Vec<Scalar> {
    let r = cfg.ring();
    let binv = r.bar_one_inv();
    (0..cfg.dim())
        .map(|j| {
            let s = x
                .iter()
                .enumerate()
                .filter(|(_, xi)| !r.is_zero(xi))
                .fold(r.zero(), |acc, (i, xi)| r.add(&acc, &r.mul(&r.bar(xi), gram.get(i, j))));
            r.mul(&binv, &s)
        })
        .collect()
}

/// Matrix of `T_{u,v}(r): w ↦ w + u·1̄⁻¹(⟨v,w⟩ + r⟨u,w⟩) + v⟨u,w⟩` in `order`.
pub fn esd_matrix(
    cfg: &SpaceConfig,
    order: BasisOrder,
    u: &[Scalar],
    v: &[Scalar],
    r: &Scalar,
) -> Result<Matrix> {
    check_dim(cfg, u)?;
    check_dim(cfg, v)?;
    let ring = cfg.ring();
    let gram = cfg.gram(order);
    let pu = pairing_row(cfg, &gram, u);
    let pv = pairing_row(cfg, &gram, v);
    let binv = ring.bar_one_inv();
    let k = cfg.dim();
    let mut m = Matrix::identity(ring, k);
    for j in 0..k {
        let cu = ring.mul(&binv, &ring.add(&pv[j], &ring.mul(r, &pu[j])));
        for i in 0..k {
            let delta = ring.add(&ring.mul(&u[i], &cu), &ring.mul(&v[i], &pu[j]));
            if !ring.is_zero(&delta) {
                m.set(i, j, ring.add(m.get(i, j), &delta));
            }
        }
    }
    Ok(m)
}

/// `⟨u, v⟩ = 0`, `(u, 0) ∈ 𝔏_max` and `(v, r) ∈ 𝔏_max`; hyperbolic-first vectors.
pub fn esd_validate(cfg: &SpaceConfig, u: &[Scalar], v: &[Scalar], r: &Scalar) -> Result<bool> {
    let ring = cfg.ring();
    Ok(ring.is_zero(&cfg.inner(u, v)?)
        && cfg.in_l_max(&HeisElem::new(u.to_vec(), ring.zero()))?
        && cfg.in_l_max(&HeisElem::new(v.to_vec(), r.clone()))?)
}

fn esd_validate_in(
    cfg: &SpaceConfig,
    order: BasisOrder,
    u: &[Scalar],
    v: &[Scalar],
    r: &Scalar,
) -> Result<bool> {
    match order {
        BasisOrder::HyperbolicFirst => esd_validate(cfg, u, v, r),
        BasisOrder::ModuleFirst => {
            esd_validate(cfg, &cfg.to_hyperbolic_first(u), &cfg.to_hyperbolic_first(v), r)
        }
    }
}

/// Coordinates of a module-first vector used by the `T_{±1}` displays.
struct Coords<'a> {
    cfg: &'a SpaceConfig,
    u: &'a [Scalar],
}

impl Coords<'_> {
    fn t(&self, k: usize) -> &Scalar {
        &self.u[k]
    }

    fn b(&self, j: i64) -> &Scalar {
        &self.u[self.slot(BasisLabel::E(j))]
    }

    fn slot(&self, label: BasisLabel) -> usize {
        self.cfg.slot(BasisOrder::ModuleFirst, label).expect("label in range")
    }

    /// `Σ_l t̄_l φ_lk`.
    fn phi_weighted(&self, k: usize) -> Scalar {
        let r = self.cfg.ring();
        let phi = self.cfg.phi();
        r.sum(
            (0..self.cfg.n())
                .map(|l| r.mul(&r.bar(self.t(l)), phi.get(l, k)))
                .collect::<Vec<_>>()
                .iter(),
        )
    }
}

fn check_forbidden(cfg: &SpaceConfig, u: &[Scalar], label: BasisLabel, name: &str) -> Result<()> {
    check_dim(cfg, u)?;
    let idx = cfg.slot(BasisOrder::ModuleFirst, label)?;
    if !cfg.ring().is_zero(&u[idx]) {
        return Err(Error::BadCoordinate(format!(
            "{name} requires a zero {label:?} coordinate, found {}",
            cfg.ring().format(&u[idx])
        )));
    }
    Ok(())
}

/// `T₁(u, a)` in module-first order; `u` is module-first with zero `e₋₁` coordinate.
/// Equals `esd_matrix(e₁, −u, −a)`.
pub fn t_plus1(cfg: &SpaceConfig, u: &[Scalar], a: &Scalar) -> Result<Matrix> {
    check_forbidden(cfg, u, BasisLabel::E(-1), "T_1")?;
    let r = cfg.ring();
    let c = Coords { cfg, u };
    let oi = r.bar_one_inv();
    let oi2 = r.mul(&oi, &oi);
    let (e1, em1) = (c.slot(BasisLabel::E(1)), c.slot(BasisLabel::E(-1)));
    let mut m = Matrix::identity(r, cfg.dim());
    for k in 0..cfg.n() {
        m.set(e1, k, r.neg(&r.mul(&oi2, &c.phi_weighted(k))));
        m.set(k, em1, r.neg(c.t(k)));
    }
    let corner = r.add(&r.add(&r.mul(&r.bar(c.b(1)), &oi2), &r.mul(a, &oi)), c.b(1));
    m.set(e1, em1, r.neg(&corner));
    for j in 2..=cfg.m() as i64 {
        let (ej, emj) = (c.slot(BasisLabel::E(j)), c.slot(BasisLabel::E(-j)));
        m.set(ej, em1, r.neg(c.b(j)));
        m.set(emj, em1, r.neg(c.b(-j)));
        m.set(e1, ej, r.mul(&oi, &r.bar(c.b(-j))));
        m.set(e1, emj, r.neg(&r.mul(&oi2, &r.bar(c.b(j)))));
    }
    Ok(m)
}

/// `T₋₁(u, a)` in module-first order; `u` is module-first with zero `e₁` coordinate.
/// Equals `esd_matrix(e₋₁, u·1̄⁻¹, −a)`.
pub fn t_minus1(cfg: &SpaceConfig, u: &[Scalar], a: &Scalar) -> Result<Matrix> {
    check_forbidden(cfg, u, BasisLabel::E(1), "T_-1")?;
    let r = cfg.ring();
    let c = Coords { cfg, u };
    let oi = r.bar_one_inv();
    let (e1, em1) = (c.slot(BasisLabel::E(1)), c.slot(BasisLabel::E(-1)));
    let mut m = Matrix::identity(r, cfg.dim());
    for k in 0..cfg.n() {
        m.set(em1, k, r.mul(&oi, &c.phi_weighted(k)));
        m.set(k, e1, r.neg(c.t(k)));
    }
    m.set(em1, e1, r.sub(&r.sub(a, &r.bar(c.b(-1))), c.b(-1)));
    for j in 2..=cfg.m() as i64 {
        let (ej, emj) = (c.slot(BasisLabel::E(j)), c.slot(BasisLabel::E(-j)));
        m.set(ej, e1, r.neg(c.b(j)));
        m.set(emj, e1, r.neg(c.b(-j)));
        m.set(em1, ej, r.neg(&r.bar(c.b(-j))));
        m.set(em1, emj, r.mul(&oi, &r.bar(c.b(j))));
    }
    Ok(m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransvectionKind {
    Esd { u: Vec<Scalar>, v: Vec<Scalar>, r: Scalar },
    Short { i: i64, j: i64, r: Scalar },
    Ultrashort { i: i64, u: Vec<Scalar>, r: Scalar },
    Long { i: i64, r: Scalar },
    TPlus1 { u: Vec<Scalar>, a: Scalar },
    TMinus1 { u: Vec<Scalar>, a: Scalar },
}

/// A transvection together with the coordinate order of its vectors and
/// of the resulting matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransvectionSpec {
    pub kind: TransvectionKind,
    pub order: BasisOrder,
}

fn order_name(order: BasisOrder) -> &'static str {
    match order {
        BasisOrder::HyperbolicFirst => "hyperbolic_first",
        BasisOrder::ModuleFirst => "module_first",
    }
}

impl TransvectionSpec {
    pub fn new(kind: TransvectionKind, order: BasisOrder) -> Self {
        TransvectionSpec { kind, order }
    }

    pub fn to_json(&self, ring: &Ring) -> Value {
        let s = |x: &Scalar| ring.scalar_to_json(x);
        let vec = |x: &[Scalar]| vector_to_json(ring, x);
        let mut out = match &self.kind {
            TransvectionKind::Esd { u, v, r } => json!({"kind": "esd", "u": vec(u), "v": vec(v), "r": s(r)}),
            TransvectionKind::Short { i, j, r } => json!({"kind": "short", "i": i, "j": j, "r": s(r)}),
            TransvectionKind::Ultrashort { i, u, r } => {
                json!({"kind": "ultrashort", "i": i, "u": vec(u), "r": s(r)})
            }
            TransvectionKind::Long { i, r } => json!({"kind": "long", "i": i, "r": s(r)}),
            TransvectionKind::TPlus1 { u, a } => json!({"kind": "t_plus1", "u": vec(u), "a": s(a)}),
            TransvectionKind::TMinus1 { u, a } => json!({"kind": "t_minus1", "u": vec(u), "a": s(a)}),
        };
        out["order"] = json!(order_name(self.order));
        out
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<TransvectionSpec> {
        let field = |k: &str| v.get(k).unwrap_or(&Value::Null);
        let scalar = |k: &str| ring.scalar_from_json(field(k));
        let vector = |k: &str| vector_from_json(ring, field(k));
        let index = |k: &str| {
            field(k)
                .as_i64()
                .ok_or_else(|| Error::Parse(format!("transvection needs integer \"{k}\"")))
        };
        let order = match field("order").as_str() {
            None | Some("hyperbolic_first") => BasisOrder::HyperbolicFirst,
            Some("module_first") => BasisOrder::ModuleFirst,
            Some(other) => return Err(Error::Parse(format!("unknown order {other:?}"))),
        };
        let kind = match field("kind").as_str() {
            Some("esd") => TransvectionKind::Esd { u: vector("u")?, v: vector("v")?, r: scalar("r")? },
            Some("short") => TransvectionKind::Short { i: index("i")?, j: index("j")?, r: scalar("r")? },
            Some("ultrashort") => {
                TransvectionKind::Ultrashort { i: index("i")?, u: vector("u")?, r: scalar("r")? }
            }
            Some("long") => TransvectionKind::Long { i: index("i")?, r: scalar("r")? },
            Some("t_plus1") => TransvectionKind::TPlus1 { u: vector("u")?, a: scalar("a")? },
            Some("t_minus1") => TransvectionKind::TMinus1 { u: vector("u")?, a: scalar("a")? },
            _ => return Err(Error::Parse(format!("unknown transvection kind in {v}"))),
        };
        Ok(TransvectionSpec { kind, order })
    }
}

fn check_root_index(cfg: &SpaceConfig, i: i64) -> Result<()> {
    if i == 0 || i.unsigned_abs() as usize > cfg.m() {
        return Err(Error::BadIndex(format!("root index {i} with m = {}", cfg.m())));
    }
    Ok(())
}

/// Delegates to [`esd_matrix`] with the root-subgroup arguments.
///
/// Short: `T_{e₋ⱼ, −eᵢ r εⱼ}(0)`. Ultrashort: `T_{eᵢ, u ε₋ᵢ}(−ε̄₋ᵢ 1̄⁻¹ r ε₋ᵢ)`.
/// Long: ultrashort with `u = 0`. Every kind except the explicit `T_{±1}`
/// matrices must pass [`esd_validate`].
pub fn root_transvection(cfg: &SpaceConfig, spec: &TransvectionSpec) -> Result<Matrix> {
    let r = cfg.ring();
    let order = spec.order;
    let unit = |j: i64| cfg.unit_vector(order, BasisLabel::E(j));
    let (u, v, s) = match &spec.kind {
        TransvectionKind::TPlus1 { u, a } | TransvectionKind::TMinus1 { u, a } => {
            check_dim(cfg, u)?;
            let module_u = match order {
                BasisOrder::ModuleFirst => u.clone(),
                BasisOrder::HyperbolicFirst => cfg.to_module_first(u),
            };
            let m = if matches!(spec.kind, TransvectionKind::TPlus1 { .. }) {
                t_plus1(cfg, &module_u, a)?
            } else {
                t_minus1(cfg, &module_u, a)?
            };
            return match order {
                BasisOrder::ModuleFirst => Ok(m),
                BasisOrder::HyperbolicFirst => cfg.matrix_to_hyperbolic_first(&m),
            };
        }
        TransvectionKind::Esd { u, v, r: s } => (u.clone(), v.clone(), s.clone()),
        TransvectionKind::Short { i, j, r: x } => {
            check_root_index(cfg, *i)?;
            check_root_index(cfg, *j)?;
            if i == j || *i == -*j {
                return Err(Error::BadIndex(format!("short root needs i != ±j, got ({i},{j})")));
            }
            let coef = r.neg(&r.mul(x, &epsilon(r, *j)?));
            let v = unit(*i)?.iter().map(|c| r.mul(c, &coef)).collect();
            (unit(-*j)?, v, r.zero())
        }
        TransvectionKind::Ultrashort { i, u, r: x } => ultrashort_args(cfg, order, *i, u, x)?,
        TransvectionKind::Long { i, r: x } => ultrashort_args(cfg, order, *i, &cfg.zero_vector(), x)?,
    };
    if !esd_validate_in(cfg, order, &u, &v, &s)? {
        return Err(Error::InvalidFormParameter(format!(
            "transvection arguments fail the form-parameter conditions: {:?}",
            spec.kind
        )));
    }
    esd_matrix(cfg, order, &u, &v, &s)
}

fn ultrashort_args(
    cfg: &SpaceConfig,
    order: BasisOrder,
    i: i64,
    u: &[Scalar],
    x: &Scalar,
) -> Result<(Vec<Scalar>, Vec<Scalar>, Scalar)> {
    check_root_index(cfg, i)?;
    check_dim(cfg, u)?;
    let r = cfg.ring();
    let eps = epsilon(r, -i)?;
    let s = r.neg(&r.product([&r.bar(&eps), &r.bar_one_inv(), x, &eps]));
    let v = u.iter().map(|c| r.mul(c, &eps)).collect();
    Ok((cfg.unit_vector(order, BasisLabel::E(i))?, v, s))
}

fn check_square(cfg: &SpaceConfig, m: &Matrix) -> Result<()> {
    if m.rows() != cfg.dim() || m.cols() != cfg.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix in a space of dimension {}",
            m.rows(),
            m.cols(),
            cfg.dim()
        )));
    }
    if m.ring() != cfg.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(())
}

/// `1̄⁻¹ · M̄ᵗ Ψ M = Ψ`, hyperbolic-first.
pub fn isometry_check(cfg: &SpaceConfig, m: &Matrix) -> Result<bool> {
    check_square(cfg, m)?;
    let lhs = m
        .bar_transpose()
        .scale(&cfg.ring().bar_one_inv())
        .mul(cfg.psi())?
        .mul(m)?;
    Ok(lhs == *cfg.psi())
}

/// `δ(x) = tr(Mx − x, ⟨x − Mx, x⟩)`.
pub fn congruence_defect(cfg: &SpaceConfig, m: &Matrix, x: &[Scalar]) -> Result<Scalar> {
    check_square(cfg, m)?;
    let r = cfg.ring();
    let mx = m.apply(x)?;
    let u: Vec<Scalar> = mx.iter().zip(x).map(|(a, b)| r.sub(a, b)).collect();
    let minus_u: Vec<Scalar> = u.iter().map(|a| r.neg(a)).collect();
    let b = cfg.inner(&minus_u, x)?;
    cfg.heis_trace(&HeisElem::new(u, b))
}

/// Vectors on which vanishing of `δ` decides vanishing everywhere: `g·b_k`
/// for every additive generator `g` of the ring, and all pairwise sums of
/// distinct such vectors.
pub fn congruence_test_vectors(cfg: &SpaceConfig) -> Vec<Vec<Scalar>> {
    let r = cfg.ring();
    let mut gens = Vec::new();
    for k in 0..cfg.dim() {
        for g in r.additive_generators() {
            let mut x = cfg.zero_vector();
            x[k] = g;
            gens.push(x);
        }
    }
    let mut out = gens.clone();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            out.push(gens[i].iter().zip(&gens[j]).map(|(a, b)| r.add(a, b)).collect());
        }
    }
    out
}

/// First test vector with nonzero defect, if any.
pub fn congruence_witness(cfg: &SpaceConfig, m: &Matrix) -> Result<Option<Vec<Scalar>>> {
    for x in congruence_test_vectors(cfg) {
        if !cfg.ring().is_zero(&congruence_defect(cfg, m, &x)?) {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// `M ≅ I (mod 𝔏_max)`, decided on [`congruence_test_vectors`].
pub fn congruent_mod_lmax(cfg: &SpaceConfig, m: &Matrix) -> Result<bool> {
    Ok(congruence_witness(cfg, m)?.is_none())
}

/// Brute-force decision over every vector of a finite space; `None` for
/// infinite rings.
pub fn congruent_mod_lmax_exhaustive(cfg: &SpaceConfig, m: &Matrix) -> Result<Option<bool>> {
    check_square(cfg, m)?;
    let Some(elements) = cfg.ring().elements() else {
        return Ok(None);
    };
    let k = cfg.dim();
    let mut idx = vec![0usize; k];
    loop {
        let x: Vec<Scalar> = idx.iter().map(|&i| elements[i].clone()).collect();
        if !cfg.ring().is_zero(&congruence_defect(cfg, m, &x)?) {
            return Ok(Some(false));
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(Some(true));
            }
            idx[pos] += 1;
            if idx[pos] < elements.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// A random triple passing [`esd_validate`], hyperbolic-first.
///
/// `u` lies in the span of one isotropic vector from each hyperbolic pair;
/// `v` vanishes on the partners of those vectors; `r` solves `r − r̄ = ⟨v,v⟩`
/// shifted by a random `s + s̄`.
pub fn sample_esd_triple<R: Rng + ?Sized>(
    cfg: &SpaceConfig,
    rng: &mut R,
) -> (Vec<Scalar>, Vec<Scalar>, Scalar) {
    let ring = cfg.ring();
    loop {
        let mut u = cfg.zero_vector();
        let mut v = cfg.sample_vector(rng);
        for j in 1..=cfg.m() as i64 {
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let own = cfg.slot(BasisOrder::HyperbolicFirst, BasisLabel::E(sign * j)).expect("in range");
            let partner = cfg.slot(BasisOrder::HyperbolicFirst, BasisLabel::E(-sign * j)).expect("in range");
            u[own] = ring.sample(rng);
            v[partner] = ring.zero();
        }
        let vv = cfg.inner(&v, &v).expect("sized");
        if let Some(base) = ring.solve_bar_difference(&ring.neg(&vv)) {
            let s = ring.sample(rng);
            let r = ring.add(&base, &ring.add(&s, &ring.bar(&s)));
            return (u, v, r);
        }
    }
}
