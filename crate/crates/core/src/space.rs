//! Odd hyperbolic spaces `ℍ^m ⊕ V₀`, their form matrices, and the
//! Heisenberg group with its form parameters.
//!
//! Coordinates are hyperbolic-first (`e₁, e₋₁, …, e_m, e₋m, v₁, …, v_n`)
//! unless a [`BasisOrder`] says otherwise. The form is
//! `⟨u, v⟩ = 1̄⁻¹ · ūᵗ Ψ v`, so `⟨b_i, b_j⟩ = Ψ_ij` on basis vectors.

use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{rows_from_json, vector_from_json, vector_to_json, Matrix};
use crate::report::Report;
use crate::ring::{Ring, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisOrder {
    HyperbolicFirst,
    ModuleFirst,
}

/// A standard basis vector: `E(±j)` for `e_{±j}`, `V(k)` for `v_k` (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisLabel {
    E(i64),
    V(usize),
}

/// `ψ̃_r`: `r` diagonal copies of `[[0, 1], [−1̄, 0]]`.
pub fn build_psi_tilde(ring: &Ring, r: usize) -> Matrix {
    let block = Matrix::from_rows(
        ring,
        vec![
            vec![ring.zero(), ring.one()],
            vec![ring.neg(&ring.bar_one()), ring.zero()],
        ],
    )
    .expect("2x2 block");
    repeat_diagonal(ring, &block, r)
}

/// `ψ̃′_r`: `r` diagonal copies of `[[0, −1̄⁻¹], [1, 0]]`, the inverse of `ψ̃_r`.
pub fn build_psi_tilde_prime(ring: &Ring, r: usize) -> Matrix {
    let block = Matrix::from_rows(
        ring,
        vec![
            vec![ring.zero(), ring.neg(&ring.bar_one_inv())],
            vec![ring.one(), ring.zero()],
        ],
    )
    .expect("2x2 block");
    repeat_diagonal(ring, &block, r)
}

fn repeat_diagonal(ring: &Ring, block: &Matrix, copies: usize) -> Matrix {
    let k = block.rows();
    let mut out = Matrix::zeros(ring, k * copies, k * copies);
    for c in 0..copies {
        out.paste(c * k, c * k, block);
    }
    out
}

/// The trailing pieces of `Ψ = [[0, c], [−1̄cᵗ, μ]]` and `Ψ⁻¹ = [[0, d], [−1̄dᵗ, ρ]]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Blocks {
    pub c: Vec<Scalar>,
    pub d: Vec<Scalar>,
    pub mu: Matrix,
    pub rho: Matrix,
}

/// A Heisenberg-group element `(u, r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisElem {
    pub u: Vec<Scalar>,
    pub r: Scalar,
}

impl HeisElem {
    pub fn new(u: Vec<Scalar>, r: Scalar) -> HeisElem {
        HeisElem { u, r }
    }

    pub fn to_json(&self, ring: &Ring) -> Value {
        json!({ "u": vector_to_json(ring, &self.u), "r": ring.scalar_to_json(&self.r) })
    }

    pub fn from_json(ring: &Ring, v: &Value) -> Result<HeisElem> {
        let u = vector_from_json(ring, v.get("u").unwrap_or(&Value::Null))?;
        let r = ring.scalar_from_json(v.get("r").unwrap_or(&Value::Null))?;
        Ok(HeisElem { u, r })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceConfig {
    ring: Ring,
    m: usize,
    n: usize,
    phi: Matrix,
    phi_inv: Matrix,
    psi: Matrix,
    psi_inv: Matrix,
}

impl SpaceConfig {
    /// Validates `φφ⁻¹ = φ⁻¹φ = I` and `φ = −bar_transpose(φ)`.
    pub fn new(ring: &Ring, m: usize, phi: Matrix, phi_inv: Matrix) -> Result<SpaceConfig> {
        let cfg = SpaceConfig::without_form_check(ring, m, phi, phi_inv)?;
        if cfg.phi != cfg.phi.bar_transpose().neg() {
            return Err(Error::InvalidPhi(format!(
                "phi = {} is not anti-Hermitian over {ring}",
                cfg.phi
            )));
        }
        Ok(cfg)
    }

    /// Like [`SpaceConfig::new`] but skips the anti-Hermitian requirement.
    /// Used to exhibit failing forms.
    pub fn without_form_check(
        ring: &Ring,
        m: usize,
        phi: Matrix,
        phi_inv: Matrix,
    ) -> Result<SpaceConfig> {
        if m == 0 {
            return Err(Error::InvalidPhi("hyperbolic rank m must be at least 1".into()));
        }
        if phi.ring() != ring || phi_inv.ring() != ring {
            return Err(Error::RingMismatch);
        }
        let n = phi.rows();
        if !phi.is_square() || phi_inv.rows() != n || phi_inv.cols() != n {
            return Err(Error::InvalidPhi("phi and phi_inv must be n x n".into()));
        }
        if !phi.mul(&phi_inv)?.is_identity() || !phi_inv.mul(&phi)?.is_identity() {
            return Err(Error::InvalidPhi("phi_inv is not the inverse of phi".into()));
        }
        let psi = build_psi_tilde(ring, m).direct_sum(&phi)?;
        let psi_inv = build_psi_tilde_prime(ring, m).direct_sum(&phi_inv)?;
        Ok(SpaceConfig {
            ring: ring.clone(),
            m,
            n,
            phi,
            phi_inv,
            psi,
            psi_inv,
        })
    }

    /// `φ = I_n`; anti-Hermitian only when `bar = −id`.
    pub fn with_identity_phi(ring: &Ring, m: usize, n: usize) -> Result<SpaceConfig> {
        let i = Matrix::identity(ring, n);
        SpaceConfig::new(ring, m, i.clone(), i)
    }

    /// `φ = ψ̃_{n/2}`, valid over every ring; requires even `n`.
    pub fn with_skew_standard_phi(ring: &Ring, m: usize, n: usize) -> Result<SpaceConfig> {
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidPhi(format!("skew-standard phi needs even n, got {n}")));
        }
        SpaceConfig::new(
            ring,
            m,
            build_psi_tilde(ring, n / 2),
            build_psi_tilde_prime(ring, n / 2),
        )
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `n + 2m`.
    pub fn dim(&self) -> usize {
        self.n + 2 * self.m
    }

    pub fn phi(&self) -> &Matrix {
        &self.phi
    }

    pub fn phi_inv(&self) -> &Matrix {
        &self.phi_inv
    }

    /// `Ψ = ψ̃_m ⊥ φ`.
    pub fn psi(&self) -> &Matrix {
        &self.psi
    }

    /// `Ψ⁻¹ = ψ̃′_m ⊥ φ⁻¹`.
    pub fn psi_inv(&self) -> &Matrix {
        &self.psi_inv
    }

    /// Gram matrix in the given order.
    pub fn gram(&self, order: BasisOrder) -> Matrix {
        match order {
            BasisOrder::HyperbolicFirst => self.psi.clone(),
            BasisOrder::ModuleFirst => self
                .phi
                .direct_sum(&build_psi_tilde(&self.ring, self.m))
                .expect("same ring"),
        }
    }

    /// 0-based coordinate index of a basis label.
    pub fn slot(&self, order: BasisOrder, label: BasisLabel) -> Result<usize> {
        let hyp = match label {
            BasisLabel::E(j) => {
                let a = j.unsigned_abs() as usize;
                if j == 0 || a > self.m {
                    return Err(Error::BadIndex(format!("e_{j} with m = {}", self.m)));
                }
                2 * (a - 1) + usize::from(j < 0)
            }
            BasisLabel::V(k) => {
                if k == 0 || k > self.n {
                    return Err(Error::BadIndex(format!("v_{k} with n = {}", self.n)));
                }
                2 * self.m + k - 1
            }
        };
        Ok(match order {
            BasisOrder::HyperbolicFirst => hyp,
            BasisOrder::ModuleFirst => self.to_module_index(hyp),
        })
    }

    fn to_module_index(&self, hyp: usize) -> usize {
        if hyp < 2 * self.m {
            self.n + hyp
        } else {
            hyp - 2 * self.m
        }
    }

    pub fn unit_vector(&self, order: BasisOrder, label: BasisLabel) -> Result<Vec<Scalar>> {
        let mut v = self.zero_vector();
        v[self.slot(order, label)?] = self.ring.one();
        Ok(v)
    }

    pub fn zero_vector(&self) -> Vec<Scalar> {
        vec![self.ring.zero(); self.dim()]
    }

    /// Reorders hyperbolic-first coordinates into module-first ones.
    pub fn to_module_first(&self, x: &[Scalar]) -> Vec<Scalar> {
        let mut out = self.zero_vector();
        for (h, xi) in x.iter().enumerate() {
            out[self.to_module_index(h)] = xi.clone();
        }
        out
    }

    /// Reorders module-first coordinates into hyperbolic-first ones.
    pub fn to_hyperbolic_first(&self, x: &[Scalar]) -> Vec<Scalar> {
        (0..self.dim())
            .map(|h| x[self.to_module_index(h)].clone())
            .collect()
    }

    /// `P = [[0, I_2m], [I_n, 0]]`, sending module-first coordinates to
    /// hyperbolic-first ones: `x_H = P x_M`.
    pub fn change_of_basis(&self) -> Matrix {
        let k = self.dim();
        let mut p = Matrix::zeros(&self.ring, k, k);
        for h in 0..k {
            p.set(h, self.to_module_index(h), self.ring.one());
        }
        p
    }

    /// Rewrites a module-first matrix in hyperbolic-first coordinates.
    pub fn matrix_to_hyperbolic_first(&self, m: &Matrix) -> Result<Matrix> {
        let p = self.change_of_basis();
        p.mul(m)?.mul(&p.transpose())
    }

    /// Rewrites a hyperbolic-first matrix in module-first coordinates.
    pub fn matrix_to_module_first(&self, m: &Matrix) -> Result<Matrix> {
        let p = self.change_of_basis();
        p.transpose().mul(m)?.mul(&p)
    }

    /// `(c, d, μ, ρ)`.
    pub fn blocks(&self) -> Blocks {
        let k = self.dim();
        let first_row = |m: &Matrix| m.row(0)[1..k].to_vec();
        Blocks {
            c: first_row(&self.psi),
            d: first_row(&self.psi_inv),
            mu: self.psi.trailing_submatrix(1).expect("dim >= 2"),
            rho: self.psi_inv.trailing_submatrix(1).expect("dim >= 2"),
        }
    }

    fn check_len(&self, x: &[Scalar], want: usize) -> Result<()> {
        if x.len() != want {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} where {want} is required",
                x.len()
            )));
        }
        Ok(())
    }

    /// `1̄⁻¹ · ūᵗ G v` for an arbitrary Gram matrix.
    pub(crate) fn sesquilinear(&self, gram: &Matrix, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let r = &self.ring;
        let mut acc = r.zero();
        for (i, ui) in u.iter().enumerate() {
            if r.is_zero(ui) {
                continue;
            }
            let ub = r.bar(ui);
            for (j, vj) in v.iter().enumerate() {
                let g = gram.get(i, j);
                if r.is_zero(g) || r.is_zero(vj) {
                    continue;
                }
                acc = r.add(&acc, &r.product([&ub, g, vj]));
            }
        }
        r.mul(&r.bar_one_inv(), &acc)
    }

    /// `⟨u, v⟩` in hyperbolic-first coordinates.
    pub fn inner(&self, u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
        self.check_len(u, self.dim())?;
        self.check_len(v, self.dim())?;
        Ok(self.sesquilinear(&self.psi, u, v))
    }

    /// `⟨u, v⟩` with both vectors given in `order`.
    pub fn inner_in(&self, order: BasisOrder, u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
        self.check_len(u, self.dim())?;
        self.check_len(v, self.dim())?;
        Ok(match order {
            BasisOrder::HyperbolicFirst => self.sesquilinear(&self.psi, u, v),
            BasisOrder::ModuleFirst => {
                self.sesquilinear(&self.psi, &self.to_hyperbolic_first(u), &self.to_hyperbolic_first(v))
            }
        })
    }

    /// Inner square on the complement of the first hyperbolic pair:
    /// `1̄⁻¹ · w̄ (ψ̃_{m−1} ⊥ φ) wᵗ`.
    pub fn q_small(&self, w: &[Scalar]) -> Result<Scalar> {
        self.check_len(w, self.dim() - 2)?;
        let gram = self.psi.trailing_submatrix(2).unwrap_or_else(|_| Matrix::zeros(&self.ring, 0, 0));
        Ok(self.sesquilinear(&gram, w, w))
    }

    /// Matrix criterion `Ψ = −bar_transpose(Ψ)` cross-checked against
    /// `⟨u, v⟩ = −bar(⟨v, u⟩)` on basis pairs and seeded random pairs.
    pub fn anti_hermitian_check(&self) -> Report {
        let r = &self.ring;
        let mut report = Report::new("anti-Hermitian form");
        let target = self.psi.bar_transpose().neg();
        let matrix_witness = (0..self.dim())
            .flat_map(|i| (0..self.dim()).map(move |j| (i, j)))
            .find(|&(i, j)| self.psi.get(i, j) != target.get(i, j));
        report.push(
            "Psi = -bar_transpose(Psi)",
            matrix_witness.is_none(),
            matrix_witness.map(|(i, j)| {
                format!(
                    "entry ({},{}) is {} but should be {}",
                    i + 1,
                    j + 1,
                    r.format(self.psi.get(i, j)),
                    r.format(target.get(i, j))
                )
            }),
        );

        let mut pairs = Vec::new();
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let mut u = self.zero_vector();
                let mut v = self.zero_vector();
                u[i] = r.one();
                v[j] = r.one();
                pairs.push((u, v));
            }
        }
        let mut rng = rand::rngs::StdRng::seed_from_u64(0xa11ce);
        for _ in 0..32 {
            pairs.push((self.sample_vector(&mut rng), self.sample_vector(&mut rng)));
        }
        let vector_witness = pairs.iter().find(|(u, v)| {
            self.sesquilinear(&self.psi, u, v) != r.neg(&r.bar(&self.sesquilinear(&self.psi, v, u)))
        });
        let fmt_vec = |x: &[Scalar]| {
            format!("({})", x.iter().map(|s| r.format(s)).collect::<Vec<_>>().join(","))
        };
        report.push(
            "<u,v> = -bar(<v,u>)",
            vector_witness.is_none(),
            vector_witness.map(|(u, v)| format!("u={}, v={}", fmt_vec(u), fmt_vec(v))),
        );
        let agree = matrix_witness.is_none() == vector_witness.is_none();
        report.push("matrix and vector criteria agree", agree, None);
        report
    }

    pub fn sample_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Scalar> {
        (0..self.dim()).map(|_| self.ring.sample(rng)).collect()
    }

    fn check_heis(&self, x: &HeisElem) -> Result<()> {
        self.check_len(&x.u, self.dim())
    }

    /// `(u, r) +̇ (v, s) = (u + v, r + s + ⟨u, v⟩)`.
    pub fn heis_add(&self, x: &HeisElem, y: &HeisElem) -> Result<HeisElem> {
        self.check_heis(x)?;
        self.check_heis(y)?;
        let r = &self.ring;
        let u = x.u.iter().zip(&y.u).map(|(a, b)| r.add(a, b)).collect();
        let s = r.add(&r.add(&x.r, &y.r), &self.sesquilinear(&self.psi, &x.u, &y.u));
        Ok(HeisElem::new(u, s))
    }

    /// `−(u, r) = (−u, −r + ⟨u, u⟩)`.
    pub fn heis_neg(&self, x: &HeisElem) -> Result<HeisElem> {
        self.check_heis(x)?;
        let r = &self.ring;
        Ok(HeisElem::new(
            x.u.iter().map(|a| r.neg(a)).collect(),
            r.add(&r.neg(&x.r), &self.sesquilinear(&self.psi, &x.u, &x.u)),
        ))
    }

    /// `(u, r) ↼ s = (us, s̄ 1̄⁻¹ r s)`.
    pub fn heis_act(&self, x: &HeisElem, s: &Scalar) -> Result<HeisElem> {
        self.check_heis(x)?;
        let r = &self.ring;
        Ok(HeisElem::new(
            x.u.iter().map(|a| r.mul(a, s)).collect(),
            r.product([&r.bar(s), &r.bar_one_inv(), &x.r, s]),
        ))
    }

    /// `tr(u, r) = r − r̄ − ⟨u, u⟩`.
    pub fn heis_trace(&self, x: &HeisElem) -> Result<Scalar> {
        self.check_heis(x)?;
        let r = &self.ring;
        Ok(r.sub(
            &r.sub(&x.r, &r.bar(&x.r)),
            &self.sesquilinear(&self.psi, &x.u, &x.u),
        ))
    }

    pub fn in_l_max(&self, x: &HeisElem) -> Result<bool> {
        Ok(self.ring.is_zero(&self.heis_trace(x)?))
    }

    pub fn in_l_min(&self, x: &HeisElem) -> Result<bool> {
        self.check_heis(x)?;
        Ok(x.u.iter().all(|a| self.ring.is_zero(a)) && self.ring.solve_trace_form(&x.r).is_some())
    }

    /// `(0, r) ∈ 𝔏_max`, i.e. `r = r̄`.
    pub fn in_l_ev(&self, r: &Scalar) -> bool {
        self.ring.bar(r) == *r
    }

    pub fn heis_zero(&self) -> HeisElem {
        HeisElem::new(self.zero_vector(), self.ring.zero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ring": serde_json::to_value(&self.ring).expect("ring serializes"),
            "m": self.m,
            "n": self.n,
            "phi": self.phi.entries_json(),
            "phi_inv": self.phi_inv.entries_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<SpaceConfig> {
        let ring: Ring = serde_json::from_value(v.get("ring").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("space ring: {e}")))?;
        let dim = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("space needs integer \"{key}\"")))
        };
        let (m, n) = (dim("m")?, dim("n")?);
        let square = |key: &str| -> Result<Matrix> {
            let rows = rows_from_json(&ring, v.get(key).unwrap_or(&Value::Null))?;
            if rows.len() != n || rows.iter().any(|row| row.len() != n) {
                return Err(Error::Parse(format!("\"{key}\" must be {n} x {n}")));
            }
            Matrix::new(&ring, n, n, rows.into_iter().flatten().collect())
        };
        SpaceConfig::new(&ring, m, square("phi")?, square("phi_inv")?)
    }
}
