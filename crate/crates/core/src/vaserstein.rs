//! Vaserstein-type matrices `L(v)`, `L(v)*`, their elementary factorizations,
//! and their conjugation to the `T_{∓1}` generators.
//!
//! A vector `v = (a₁, …, a_{n+2m−1})` fills the hyperbolic-first slots after
//! `e₁`: `a₁` at `e₋₁`, then `e₂, e₋₂, …, e_m, e₋m`, then `v₁, …, v_n`.

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{vector_from_json, vector_to_json, ElementaryWord, Matrix};
use crate::ring::Scalar;
use crate::space::{build_psi_tilde_prime, BasisLabel, BasisOrder, HeisElem, SpaceConfig};
use crate::transvection::{t_minus1, t_plus1};

/// `(a₁, …, a_{n+2m−1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VVector {
    pub a: Vec<Scalar>,
}

impl VVector {
    pub fn new(a: Vec<Scalar>) -> VVector {
        VVector { a }
    }

    pub fn to_json(&self, cfg: &SpaceConfig) -> Value {
        json!({ "v": vector_to_json(cfg.ring(), &self.a) })
    }

    pub fn from_json(cfg: &SpaceConfig, v: &Value) -> Result<VVector> {
        let a = vector_from_json(cfg.ring(), v.get("v").unwrap_or(v))?;
        check_v(cfg, &a)?;
        Ok(VVector { a })
    }
}

fn check_v(cfg: &SpaceConfig, v: &[Scalar]) -> Result<()> {
    if v.len() != cfg.dim() - 1 {
        return Err(Error::DimensionMismatch(format!(
            "v has length {} but n+2m-1 = {}",
            v.len(),
            cfg.dim() - 1
        )));
    }
    Ok(())
}

fn bar_vec(cfg: &SpaceConfig, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| cfg.ring().bar(x)).collect()
}

/// `v̄ μ` as a row.
fn vbar_mu(cfg: &SpaceConfig, v: &[Scalar]) -> Vec<Scalar> {
    let mu = cfg.blocks().mu;
    mu.transpose().apply(&bar_vec(cfg, v)).expect("sized")
}

/// `ρ v̄ᵗ` as a column.
fn rho_vbar(cfg: &SpaceConfig, v: &[Scalar]) -> Vec<Scalar> {
    cfg.blocks().rho.apply(&bar_vec(cfg, v)).expect("sized")
}

fn outer(cfg: &SpaceConfig, col: &[Scalar], row: &[Scalar]) -> Matrix {
    Matrix::column_vector(cfg.ring(), col)
        .mul(&Matrix::row_vector(cfg.ring(), row))
        .expect("outer product")
}

fn dot(cfg: &SpaceConfig, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let r = cfg.ring();
    x.iter().zip(y).fold(r.zero(), |acc, (a, b)| r.add(&acc, &r.mul(a, b)))
}

/// `α = I + dᵗ v̄ μ`.
pub fn build_alpha(cfg: &SpaceConfig, v: &[Scalar]) -> Result<Matrix> {
    check_v(cfg, v)?;
    let d = cfg.blocks().d;
    Matrix::identity(cfg.ring(), cfg.dim() - 1).add(&outer(cfg, &d, &vbar_mu(cfg, v)))
}

/// `β = I − 1̄⁻¹ ρ v̄ᵗ c`.
pub fn build_beta(cfg: &SpaceConfig, v: &[Scalar]) -> Result<Matrix> {
    check_v(cfg, v)?;
    let r = cfg.ring();
    let c = cfg.blocks().c;
    let col: Vec<Scalar> = rho_vbar(cfg, v).iter().map(|x| r.mul(&r.bar_one_inv(), x)).collect();
    Matrix::identity(r, cfg.dim() - 1).sub(&outer(cfg, &col, &c))
}

/// `L(v) = [[1, 0], [vᵗ, α]]`, hyperbolic-first.
pub fn build_l(cfg: &SpaceConfig, v: &[Scalar]) -> Result<Matrix> {
    let alpha = build_alpha(cfg, v)?;
    let r = cfg.ring();
    Matrix::from_blocks(
        &Matrix::identity(r, 1),
        &Matrix::zeros(r, 1, v.len()),
        &Matrix::column_vector(r, v),
        &alpha,
    )
}

/// `L(v)* = [[1, v], [0, β]]`, hyperbolic-first.
pub fn build_l_star(cfg: &SpaceConfig, v: &[Scalar]) -> Result<Matrix> {
    let beta = build_beta(cfg, v)?;
    let r = cfg.ring();
    Matrix::from_blocks(
        &Matrix::identity(r, 1),
        &Matrix::row_vector(r, v),
        &Matrix::zeros(r, v.len(), 1),
        &beta,
    )
}

/// `bar(a₁) − a₁ = q(a₂, …)`.
pub fn condition_d(cfg: &SpaceConfig, v: &[Scalar]) -> Result<bool> {
    check_v(cfg, v)?;
    let r = cfg.ring();
    Ok(r.sub(&r.bar(&v[0]), &v[0]) == cfg.q_small(&v[1..])?)
}

/// `w̄ Gᵗ wᵗ` with `G = ψ̃′_{m−1} ⊥ (1̄⁻¹)² φ`.
fn condition_e_rhs(cfg: &SpaceConfig, w: &[Scalar]) -> Scalar {
    let r = cfg.ring();
    let oi = r.bar_one_inv();
    let g = build_psi_tilde_prime(r, cfg.m() - 1)
        .direct_sum(&cfg.phi().scale(&r.mul(&oi, &oi)))
        .expect("same ring");
    let gw = g.transpose().apply(w).expect("sized");
    dot(cfg, &bar_vec(cfg, w), &gw)
}

/// `bar(1̄a₁) − 1̄a₁ = w̄ (ψ̃′_{m−1} ⊥ (1̄⁻¹)²φ)ᵗ wᵗ` with `w = (a₂, …)`.
pub fn condition_e(cfg: &SpaceConfig, v: &[Scalar]) -> Result<bool> {
    check_v(cfg, v)?;
    let r = cfg.ring();
    let b = r.mul(&r.bar_one(), &v[0]);
    Ok(r.sub(&r.bar(&b), &b) == condition_e_rhs(cfg, &v[1..]))
}

/// Completes `w = (a₂, …)` with an `a₁` satisfying condition (D).
pub fn force_condition_d(cfg: &SpaceConfig, w: &[Scalar]) -> Result<Vec<Scalar>> {
    let q = cfg.q_small(w)?;
    let a1 = cfg.ring().solve_bar_difference(&q).ok_or_else(|| {
        Error::ConditionUnsolvable(format!("no a1 with bar(a1) - a1 = {}", cfg.ring().format(&q)))
    })?;
    Ok(std::iter::once(a1).chain(w.iter().cloned()).collect())
}

/// Completes `w = (a₂, …)` with an `a₁` satisfying condition (E).
pub fn force_condition_e(cfg: &SpaceConfig, w: &[Scalar]) -> Result<Vec<Scalar>> {
    if w.len() != cfg.dim() - 2 {
        return Err(Error::DimensionMismatch(format!("w has length {}", w.len())));
    }
    let r = cfg.ring();
    let t = condition_e_rhs(cfg, w);
    let b = r.solve_bar_difference(&t).ok_or_else(|| {
        Error::ConditionUnsolvable(format!("no a1 with bar(1a1) - 1a1 = {}", r.format(&t)))
    })?;
    let a1 = r.mul(&r.bar_one_inv(), &b);
    Ok(std::iter::once(a1).chain(w.iter().cloned()).collect())
}

/// `[[1, y], [0, I]]` as transvections `E_{1,j+1}(y_j)`.
fn push_top_row(w: &mut ElementaryWord, y: &[Scalar]) -> Result<()> {
    for (j, yj) in y.iter().enumerate() {
        w.push_nonzero(1, j + 2, yj.clone())?;
    }
    Ok(())
}

/// `[[1, 0], [x, I]]` as transvections `E_{j+1,1}(x_j)`.
fn push_first_column(w: &mut ElementaryWord, x: &[Scalar]) -> Result<()> {
    for (j, xj) in x.iter().enumerate() {
        w.push_nonzero(j + 2, 1, xj.clone())?;
    }
    Ok(())
}

fn negated(cfg: &SpaceConfig, x: &[Scalar]) -> Vec<Scalar> {
    x.iter().map(|a| cfg.ring().neg(a)).collect()
}

/// Elementary word whose product is `L(v)`.
///
/// `L(v) = [[1,0],[vᵗ,I]] · [[1,0],[0,α]]`, and since `(v̄μ)·dᵗ = 0` the
/// second factor is the commutator `A(y) B(dᵗ) A(−y) B(−dᵗ)` with
/// `y = −v̄μ`, `A(y) = [[1,y],[0,I]]`, `B(x) = [[1,0],[x,I]]`.
pub fn factor_l(cfg: &SpaceConfig, v: &[Scalar]) -> Result<ElementaryWord> {
    check_v(cfg, v)?;
    let r = cfg.ring();
    let d = cfg.blocks().d;
    let y = negated(cfg, &vbar_mu(cfg, v));
    if !r.is_zero(&dot(cfg, &y, &d)) {
        return Err(Error::InternalInvariantViolation("v̄μdᵗ is nonzero".into()));
    }
    let mut w = ElementaryWord::new(r, cfg.dim());
    push_first_column(&mut w, v)?;
    // With y = 0 the commutator collapses to the identity.
    if y.iter().any(|x| !r.is_zero(x)) {
        push_top_row(&mut w, &y)?;
        push_first_column(&mut w, &d)?;
        push_top_row(&mut w, &negated(cfg, &y))?;
        push_first_column(&mut w, &negated(cfg, &d))?;
    }
    Ok(w)
}

/// Elementary word whose product is `L(v)*`.
///
/// `L(v)* = [[1,0],[0,β]] · [[1,v],[0,I]]`; with `z = −1̄⁻¹ρv̄ᵗ` and `c·z = 0`
/// the first factor is `B(z) A(c) B(−z) A(−c)`.
pub fn factor_l_star(cfg: &SpaceConfig, v: &[Scalar]) -> Result<ElementaryWord> {
    check_v(cfg, v)?;
    let r = cfg.ring();
    let c = cfg.blocks().c;
    let z: Vec<Scalar> = rho_vbar(cfg, v)
        .iter()
        .map(|x| r.neg(&r.mul(&r.bar_one_inv(), x)))
        .collect();
    if !r.is_zero(&dot(cfg, &c, &z)) {
        return Err(Error::InternalInvariantViolation("cρ is nonzero".into()));
    }
    let mut w = ElementaryWord::new(r, cfg.dim());
    if z.iter().any(|x| !r.is_zero(x)) {
        push_first_column(&mut w, &z)?;
        push_top_row(&mut w, &c)?;
        push_first_column(&mut w, &negated(cfg, &z))?;
        push_top_row(&mut w, &negated(cfg, &c))?;
    }
    push_top_row(&mut w, v)?;
    Ok(w)
}

/// `P = [[0, I_2m], [I_n, 0]]`.
pub fn build_p(cfg: &SpaceConfig) -> Matrix {
    cfg.change_of_basis()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConjugationKind {
    TPlus1,
    TMinus1,
}

impl ConjugationKind {
    pub fn name(self) -> &'static str {
        match self {
            ConjugationKind::TPlus1 => "t_plus1",
            ConjugationKind::TMinus1 => "t_minus1",
        }
    }

    pub fn parse(s: &str) -> Result<ConjugationKind> {
        match s {
            "t_plus1" | "plus" | "+1" => Ok(ConjugationKind::TPlus1),
            "t_minus1" | "minus" | "-1" => Ok(ConjugationKind::TMinus1),
            other => Err(Error::Parse(format!("unknown transvection kind {other:?}"))),
        }
    }
}

/// `Pᵗ M P = T_{±1}(u, a)`, with `u` module-first.
///
/// `heis_witness` is the pair `(x, s)` of the generator written as the
/// transvection `T_{e_{±1}, x}(s)`, hyperbolic-first: `(u·1̄⁻¹, −a)` for
/// `T₋₁` and `(−u, −a)` for `T₁`. The generator is unitary exactly when the
/// witness lies in `𝔏_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugationResult {
    pub kind: ConjugationKind,
    pub u: Vec<Scalar>,
    pub a: Scalar,
    pub heis_witness: HeisElem,
}

impl ConjugationResult {
    fn new(cfg: &SpaceConfig, kind: ConjugationKind, u: Vec<Scalar>, a: Scalar) -> ConjugationResult {
        let heis_witness = transvection_witness(cfg, kind, &u, &a);
        ConjugationResult {
            kind,
            u,
            a,
            heis_witness,
        }
    }

    /// The explicit generator matrix, module-first.
    pub fn matrix(&self, cfg: &SpaceConfig) -> Result<Matrix> {
        match self.kind {
            ConjugationKind::TPlus1 => t_plus1(cfg, &self.u, &self.a),
            ConjugationKind::TMinus1 => t_minus1(cfg, &self.u, &self.a),
        }
    }

    pub fn witness_in_l_max(&self, cfg: &SpaceConfig) -> Result<bool> {
        cfg.in_l_max(&self.heis_witness)
    }

    pub fn to_json(&self, cfg: &SpaceConfig) -> Value {
        let r = cfg.ring();
        json!({
            "kind": self.kind.name(),
            "u": vector_to_json(r, &self.u),
            "a": r.scalar_to_json(&self.a),
            "witness": self.heis_witness.to_json(r),
        })
    }

    pub fn from_json(cfg: &SpaceConfig, v: &Value) -> Result<ConjugationResult> {
        let r = cfg.ring();
        let kind = ConjugationKind::parse(v.get("kind").and_then(Value::as_str).unwrap_or(""))?;
        let u = vector_from_json(r, v.get("u").unwrap_or(&Value::Null))?;
        if u.len() != cfg.dim() {
            return Err(Error::DimensionMismatch(format!("u has length {}", u.len())));
        }
        let a = r.scalar_from_json(v.get("a").unwrap_or(&Value::Null))?;
        Ok(ConjugationResult::new(cfg, kind, u, a))
    }
}

/// The transvection pair of `T_{±1}(u, a)`, hyperbolic-first.
pub fn transvection_witness(cfg: &SpaceConfig, kind: ConjugationKind, u: &[Scalar], a: &Scalar) -> HeisElem {
    let r = cfg.ring();
    let x: Vec<Scalar> = match kind {
        ConjugationKind::TMinus1 => u.iter().map(|c| r.mul(c, &r.bar_one_inv())).collect(),
        ConjugationKind::TPlus1 => negated(cfg, u),
    };
    HeisElem::new(cfg.to_hyperbolic_first(&x), r.neg(a))
}

fn module_slot(cfg: &SpaceConfig, label: BasisLabel) -> usize {
    cfg.slot(BasisOrder::ModuleFirst, label).expect("label in range")
}

/// `Pᵗ L(v) P = T₋₁(u₁, a₁)`.
pub fn conj_l_to_transvection(cfg: &SpaceConfig, v: &[Scalar]) -> Result<ConjugationResult> {
    check_v(cfg, v)?;
    let r = cfg.ring();
    let m = cfg.m();
    let mut u = cfg.zero_vector();
    for k in 1..=cfg.n() {
        u[module_slot(cfg, BasisLabel::V(k))] = r.neg(&v[2 * m - 2 + k]);
    }
    for j in 2..=m {
        u[module_slot(cfg, BasisLabel::E(j as i64))] = r.neg(&v[2 * j - 3]);
        u[module_slot(cfg, BasisLabel::E(-(j as i64)))] = r.neg(&v[2 * j - 2]);
    }
    Ok(ConjugationResult::new(cfg, ConjugationKind::TMinus1, u, v[0].clone()))
}

/// `Pᵗ L(v)* P = T₁(u₂, −1̄a₁)`.
pub fn conj_lstar_to_transvection(cfg: &SpaceConfig, v: &[Scalar]) -> Result<ConjugationResult> {
    check_v(cfg, v)?;
    let r = cfg.ring();
    let (m, n) = (cfg.m(), cfg.n());
    let oi = r.bar_one_inv();
    let oi2 = r.mul(&oi, &oi);
    let phi_inv = cfg.phi_inv();
    let mut u = cfg.zero_vector();
    for k in 1..=n {
        let s = (1..=n).fold(r.zero(), |acc, l| {
            r.add(&acc, &r.mul(&r.bar(&v[2 * m - 2 + l]), phi_inv.get(k - 1, l - 1)))
        });
        u[module_slot(cfg, BasisLabel::V(k))] = r.mul(&oi, &s);
    }
    for j in 2..=m {
        u[module_slot(cfg, BasisLabel::E(j as i64))] = r.neg(&r.mul(&oi2, &r.bar(&v[2 * j - 2])));
        u[module_slot(cfg, BasisLabel::E(-(j as i64)))] = r.mul(&oi, &r.bar(&v[2 * j - 3]));
    }
    let a = r.neg(&r.mul(&r.bar_one(), &v[0]));
    Ok(ConjugationResult::new(cfg, ConjugationKind::TPlus1, u, a))
}

fn check_hyperbolic_free(cfg: &SpaceConfig, u: &[Scalar]) -> Result<()> {
    if u.len() != cfg.dim() {
        return Err(Error::DimensionMismatch(format!("u has length {}", u.len())));
    }
    for j in [1, -1] {
        let x = &u[module_slot(cfg, BasisLabel::E(j))];
        if !cfg.ring().is_zero(x) {
            return Err(Error::BadCoordinate(format!(
                "u must have zero e_{j} coordinate, found {}",
                cfg.ring().format(x)
            )));
        }
    }
    Ok(())
}

/// Preimage `w` of `T_{±1}(u, a)` without the form-parameter check:
/// `Pᵗ L(w) P = T₋₁(u, a)` or `Pᵗ L(w)* P = T₁(u, a)`.
pub fn vaserstein_preimage(
    cfg: &SpaceConfig,
    kind: ConjugationKind,
    u: &[Scalar],
    a: &Scalar,
) -> Result<Vec<Scalar>> {
    check_hyperbolic_free(cfg, u)?;
    let r = cfg.ring();
    let b = |j: i64| &u[module_slot(cfg, BasisLabel::E(j))];
    let t = |k: usize| &u[module_slot(cfg, BasisLabel::V(k))];
    let mut w = Vec::with_capacity(cfg.dim() - 1);
    match kind {
        ConjugationKind::TMinus1 => {
            w.push(a.clone());
            for j in 2..=cfg.m() as i64 {
                w.push(r.neg(b(j)));
                w.push(r.neg(b(-j)));
            }
            for k in 1..=cfg.n() {
                w.push(r.neg(t(k)));
            }
        }
        ConjugationKind::TPlus1 => {
            let oi = r.bar_one_inv();
            let oi2 = r.mul(&oi, &oi);
            w.push(r.neg(&r.mul(&oi, a)));
            for j in 2..=cfg.m() as i64 {
                w.push(r.mul(&oi, &r.bar(b(-j))));
                w.push(r.neg(&r.mul(&oi2, &r.bar(b(j)))));
            }
            let phi = cfg.phi();
            for k in 1..=cfg.n() {
                let s = (1..=cfg.n()).fold(r.zero(), |acc, j| {
                    r.add(&acc, &r.mul(&r.bar(t(j)), &r.bar(phi.get(k - 1, j - 1))))
                });
                w.push(r.mul(&oi2, &s));
            }
        }
    }
    Ok(w)
}

/// Inverse of the forward conjugations for generators of the unitary group:
/// requires zero `e_{±1}` coordinates and a witness in `𝔏_max`.
pub fn transvection_to_vaserstein(
    cfg: &SpaceConfig,
    kind: ConjugationKind,
    u: &[Scalar],
    a: &Scalar,
) -> Result<VVector> {
    check_hyperbolic_free(cfg, u)?;
    if !cfg.in_l_max(&transvection_witness(cfg, kind, u, a))? {
        return Err(Error::InvalidFormParameter(format!(
            "{} with a = {} is not in the unitary group",
            kind.name(),
            cfg.ring().format(a)
        )));
    }
    vaserstein_preimage(cfg, kind, u, a).map(VVector::new)
}

/// A random `(u, a)` accepted by [`transvection_to_vaserstein`]: `u` is
/// module-first with zero `e_{±1}` coordinates and `(u, −a) ∈ 𝔏_max`.
pub fn sample_generator_pair<R: Rng + ?Sized>(cfg: &SpaceConfig, rng: &mut R) -> (Vec<Scalar>, Scalar) {
    let r = cfg.ring();
    loop {
        let mut u = cfg.sample_vector(rng);
        for j in [1, -1] {
            u[module_slot(cfg, BasisLabel::E(j))] = r.zero();
        }
        let uu = cfg.inner_in(BasisOrder::ModuleFirst, &u, &u).expect("sized");
        if let Some(base) = r.solve_bar_difference(&uu) {
            let s = r.sample(rng);
            return (u, r.add(&base, &r.add(&s, &r.bar(&s))));
        }
    }
}

/// A uniformly sampled `v` of the right length.
pub fn sample_v<R: Rng + ?Sized>(cfg: &SpaceConfig, rng: &mut R) -> Vec<Scalar> {
    (0..cfg.dim() - 1).map(|_| cfg.ring().sample(rng)).collect()
}
