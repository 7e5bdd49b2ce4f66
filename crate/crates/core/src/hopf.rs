//! Finite-dimensional Hopf algebras presented by structure tensors, with
//! axiom verification, duals, modules and integrals.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::SparseMat;
use crate::report::Report;
use crate::scalar::Scalar;

/// Element of H in the fixed ordered basis b_0, ..., b_{d-1}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Element {
    pub coeffs: Vec<Scalar>,
}

impl Element {
    pub fn zero(level: u32, dim: usize) -> Self {
        Element { coeffs: vec![Scalar::zero(level); dim] }
    }

    pub fn basis(level: u32, dim: usize, k: usize) -> Self {
        let mut e = Self::zero(level, dim);
        e.coeffs[k] = Scalar::one(level);
        e
    }

    pub fn level(&self) -> u32 {
        self.coeffs[0].level()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Element {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Element {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Element { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn support(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

/// Functional on H (coordinates in the dual basis).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Functional {
    pub coeffs: Vec<Scalar>,
}

impl Functional {
    pub fn zero(level: u32, dim: usize) -> Self {
        Functional { coeffs: vec![Scalar::zero(level); dim] }
    }

    pub fn dual_basis(level: u32, dim: usize, k: usize) -> Self {
        let mut f = Self::zero(level, dim);
        f.coeffs[k] = Scalar::one(level);
        f
    }

    pub fn eval(&self, x: &Element) -> Scalar {
        let mut acc = Scalar::zero(self.coeffs[0].level());
        for (k, c) in x.support() {
            acc += &(&self.coeffs[k] * c);
        }
        acc
    }

    pub fn level(&self) -> u32 {
        self.coeffs[0].level()
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        Functional {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Functional { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }
}

/// Sparse element of H tensor H.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor2 {
    pub dim: usize,
    pub level: u32,
    pub entries: BTreeMap<(usize, usize), Scalar>,
}

impl Tensor2 {
    pub fn zero(level: u32, dim: usize) -> Self {
        Tensor2 { dim, level, entries: BTreeMap::new() }
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((i, j)).or_insert_with(|| Scalar::zero(self.level));
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    pub fn from_outer(x: &Element, y: &Element) -> Self {
        let mut t = Self::zero(x.level(), x.dim());
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                t.add_entry(i, j, &(a * b));
            }
        }
        t
    }

    pub fn swap(&self) -> Self {
        let mut t = Self::zero(self.level, self.dim);
        for ((i, j), v) in &self.entries {
            t.add_entry(*j, *i, v);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for ((i, j), v) in &other.entries {
            t.add_entry(*i, *j, v);
        }
        t
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for ((i, j), v) in &other.entries {
            t.add_entry(*i, *j, &-v);
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut t = Self::zero(self.level, self.dim);
        for ((i, j), v) in &self.entries {
            t.add_entry(*i, *j, &(v * s));
        }
        t
    }

    /// Contracts the first leg with a functional, leaving an Element.
    pub fn contract_first(&self, f: &Functional) -> Element {
        let mut out = Element::zero(self.level, self.dim);
        for ((i, j), v) in &self.entries {
            out.coeffs[*j] += &(&f.coeffs[*i] * v);
        }
        out
    }

    /// Contracts the second leg with a functional, leaving an Element.
    pub fn contract_second(&self, f: &Functional) -> Element {
        let mut out = Element::zero(self.level, self.dim);
        for ((i, j), v) in &self.entries {
            out.coeffs[*i] += &(&f.coeffs[*j] * v);
        }
        out
    }

    pub fn to_tensor_n(&self) -> TensorN {
        let mut t = TensorN::zero(self.level, vec![self.dim, self.dim]);
        for ((i, j), v) in &self.entries {
            t.add_entry(vec![*i, *j], v);
        }
        t
    }
}

/// Sparse order-n tensor over the basis of H (all legs of dimension d).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorN {
    pub dims: Vec<usize>,
    pub level: u32,
    pub entries: BTreeMap<Vec<usize>, Scalar>,
}

impl TensorN {
    pub fn zero(level: u32, dims: Vec<usize>) -> Self {
        TensorN { dims, level, entries: BTreeMap::new() }
    }

    pub fn add_entry(&mut self, idx: Vec<usize>, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry(idx.clone()).or_insert_with(|| Scalar::zero(self.level));
        *e += v;
        if e.is_zero() {
            self.entries.remove(&idx);
        }
    }

    pub fn order(&self) -> usize {
        self.dims.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for (idx, v) in &other.entries {
            t.add_entry(idx.clone(), v);
        }
        t
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut t = self.clone();
        for (idx, v) in &other.entries {
            t.add_entry(idx.clone(), &-v);
        }
        t
    }
}

/// Left H-module given by action matrices per basis element of H.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    pub dim: usize,
    pub action: Vec<SparseMat>,
}

impl Rep {
    /// Action of a general element.
    pub fn act(&self, x: &Element) -> SparseMat {
        let level = x.level();
        let mut out = SparseMat::zeros(level, self.dim, self.dim);
        for (k, c) in x.support() {
            out = out.add(&self.action[k].scale(c));
        }
        out
    }

    /// The matrix coefficient functional T^r_c of this module.
    pub fn matrix_coefficient(&self, h: &HopfData, r: usize, c: usize) -> Functional {
        let mut f = Functional::zero(h.level, h.dim);
        for k in 0..h.dim {
            if let Some(v) = self.action[k].get(r, c) {
                f.coeffs[k] = v.clone();
            }
        }
        f
    }
}

/// A finite-dimensional Hopf algebra by structure tensors.
#[derive(Clone, Debug)]
pub struct HopfData {
    pub level: u32,
    pub dim: usize,
    /// mult[i][j] = coordinates of b_i * b_j (sparse).
    pub mult: Vec<Vec<Vec<(usize, Scalar)>>>,
    pub unit: Element,
    /// coprod[i] = Delta(b_i) as a sparse 2-tensor.
    pub coprod: Vec<Tensor2>,
    pub counit: Vec<Scalar>,
    /// Column k holds the coordinates of S(b_k).
    pub antipode: SparseMat,
    pub antipode_inv: SparseMat,
}

impl HopfData {
    pub fn multiply_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.mult[i][j]
    }

    pub fn is_commutative(&self) -> bool {
        for i in 0..self.dim {
            for j in 0..i {
                if self.mult[i][j] != self.mult[j][i] {
                    return false;
                }
            }
        }
        true
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        assert_eq!(x.dim(), self.dim);
        assert_eq!(y.dim(), self.dim);
        let mut out = Element::zero(self.level, self.dim);
        for (i, a) in x.support() {
            for (j, b) in y.support() {
                let ab = a * b;
                for (k, c) in &self.mult[i][j] {
                    out.coeffs[*k] += &(&ab * c);
                }
            }
        }
        out
    }

    pub fn multiply_all(&self, xs: &[&Element]) -> Element {
        let mut acc = self.unit.clone();
        for x in xs {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    pub fn counit_of(&self, x: &Element) -> Scalar {
        let mut acc = Scalar::zero(self.level);
        for (k, c) in x.support() {
            acc += &(&self.counit[k] * c);
        }
        acc
    }

    pub fn apply_antipode(&self, x: &Element) -> Element {
        Element { coeffs: self.antipode.mul_vec(&x.coeffs) }
    }

    pub fn apply_antipode_inv(&self, x: &Element) -> Element {
        Element { coeffs: self.antipode_inv.mul_vec(&x.coeffs) }
    }

    pub fn coproduct(&self, x: &Element) -> Tensor2 {
        let mut t = Tensor2::zero(self.level, self.dim);
        for (k, c) in x.support() {
            for ((i, j), v) in &self.coprod[k].entries {
                t.add_entry(*i, *j, &(c * v));
            }
        }
        t
    }

    /// Iterated coproduct with n+1 output legs (n = 0 returns x itself).
    pub fn coproduct_iter(&self, x: &Element, n: usize) -> TensorN {
        let mut t = TensorN::zero(self.level, vec![self.dim]);
        for (k, c) in x.support() {
            t.add_entry(vec![k], c);
        }
        for _ in 0..n {
            // expand the first leg
            let mut next = TensorN::zero(self.level, vec![self.dim; t.order() + 1]);
            for (idx, v) in &t.entries {
                for ((i, j), w) in &self.coprod[idx[0]].entries {
                    let mut nidx = Vec::with_capacity(idx.len() + 1);
                    nidx.push(*i);
                    nidx.push(*j);
                    nidx.extend_from_slice(&idx[1..]);
                    next.add_entry(nidx, &(v * w));
                }
            }
            t = next;
        }
        t
    }

    /// Applies the counit to one slot of an iterated coproduct.
    pub fn contract_counit(&self, t: &TensorN, slot: usize) -> TensorN {
        let mut dims = t.dims.clone();
        dims.remove(slot);
        let mut out = TensorN::zero(self.level, dims);
        for (idx, v) in &t.entries {
            let c = &self.counit[idx[slot]];
            if c.is_zero() {
                continue;
            }
            let mut nidx = idx.clone();
            nidx.remove(slot);
            out.add_entry(nidx, &(v * c));
        }
        out
    }

    /// Product in H tensor H of two sparse 2-tensors.
    pub fn tensor2_mul(&self, a: &Tensor2, b: &Tensor2) -> Tensor2 {
        let mut out = Tensor2::zero(self.level, self.dim);
        for ((i, j), u) in &a.entries {
            for ((k, l), v) in &b.entries {
                let uv = u * v;
                for (p, cp) in &self.mult[*i][*k] {
                    for (q, cq) in &self.mult[*j][*l] {
                        out.add_entry(*p, *q, &(&(&uv * cp) * cq));
                    }
                }
            }
        }
        out
    }

    /// Legwise product of two sparse order-n tensors.
    pub fn tensor_n_mul(&self, a: &TensorN, b: &TensorN) -> TensorN {
        assert_eq!(a.dims, b.dims);
        let order = a.order();
        let mut out = TensorN::zero(self.level, a.dims.clone());
        for (ia, u) in &a.entries {
            for (ib, v) in &b.entries {
                // product of basis monomials leg by leg; each leg may branch
                let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), u * v)];
                for leg in 0..order {
                    let mut next = Vec::new();
                    for (idx, coeff) in &partial {
                        for (k, c) in &self.mult[ia[leg]][ib[leg]] {
                            let mut nidx = idx.clone();
                            nidx.push(*k);
                            next.push((nidx, coeff * c));
                        }
                    }
                    partial = next;
                }
                for (idx, coeff) in partial {
                    out.add_entry(idx, &coeff);
                }
            }
        }
        out
    }

    pub fn unit_tensor2(&self) -> Tensor2 {
        Tensor2::from_outer(&self.unit, &self.unit)
    }

    /// Applies a coordinate map (e.g. the antipode matrix) to one leg of a 2-tensor.
    pub fn map_leg(&self, t: &Tensor2, leg: usize, m: &SparseMat) -> Tensor2 {
        let mut out = Tensor2::zero(self.level, self.dim);
        for ((i, j), v) in &t.entries {
            let src = if leg == 0 { *i } else { *j };
            // column `src` of m = image coordinates of b_src
            for (r, row) in m.rows().iter().enumerate() {
                if let Ok(pos) = row.binary_search_by_key(&src, |(c, _)| *c) {
                    let w = &row[pos].1 * v;
                    if leg == 0 {
                        out.add_entry(r, *j, &w);
                    } else {
                        out.add_entry(*i, r, &w);
                    }
                }
            }
        }
        out
    }

    /// O(H) product of functionals: (fg)(x) = f(x')g(x'').
    pub fn functional_mul(&self, f: &Functional, g: &Functional) -> Functional {
        let mut out = Functional::zero(self.level, self.dim);
        for k in 0..self.dim {
            let mut acc = Scalar::zero(self.level);
            for ((i, j), v) in &self.coprod[k].entries {
                if f.coeffs[*i].is_zero() || g.coeffs[*j].is_zero() {
                    continue;
                }
                acc += &(&(&f.coeffs[*i] * &g.coeffs[*j]) * v);
            }
            out.coeffs[k] = acc;
        }
        out
    }

    /// The counit as a functional (unit of O(H)).
    pub fn counit_functional(&self) -> Functional {
        Functional { coeffs: self.counit.clone() }
    }

    /// f(? y): precompose with right multiplication by y.
    pub fn shift_right(&self, f: &Functional, y: &Element) -> Functional {
        let mut out = Functional::zero(self.level, self.dim);
        for k in 0..self.dim {
            // f(b_k y)
            let mut acc = Scalar::zero(self.level);
            for (j, c) in y.support() {
                for (r, w) in &self.mult[k][j] {
                    if !f.coeffs[*r].is_zero() {
                        acc += &(&(&f.coeffs[*r] * c) * w);
                    }
                }
            }
            out.coeffs[k] = acc;
        }
        out
    }

    /// f(y ?): precompose with left multiplication by y.
    pub fn shift_left(&self, f: &Functional, y: &Element) -> Functional {
        let mut out = Functional::zero(self.level, self.dim);
        for k in 0..self.dim {
            let mut acc = Scalar::zero(self.level);
            for (j, c) in y.support() {
                for (r, w) in &self.mult[j][k] {
                    if !f.coeffs[*r].is_zero() {
                        acc += &(&(&f.coeffs[*r] * c) * w);
                    }
                }
            }
            out.coeffs[k] = acc;
        }
        out
    }

    /// Verifies all Hopf axioms as exact tensor identities.
    pub fn verify_hopf_axioms(&self) -> Report {
        let mut report = Report::new();
        let d = self.dim;

        // associativity
        let mut assoc_ok = true;
        let mut witness = None;
        'assoc: for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let bi = Element::basis(self.level, d, i);
                    let bj = Element::basis(self.level, d, j);
                    let bk = Element::basis(self.level, d, k);
                    let l = self.multiply(&self.multiply(&bi, &bj), &bk);
                    let r = self.multiply(&bi, &self.multiply(&bj, &bk));
                    if l != r {
                        assoc_ok = false;
                        witness = Some(format!("basis triple ({i},{j},{k})"));
                        break 'assoc;
                    }
                }
            }
        }
        report.record("hopf.associativity", assoc_ok, witness);

        // unit
        let mut unit_ok = true;
        let mut witness = None;
        for i in 0..d {
            let bi = Element::basis(self.level, d, i);
            if self.multiply(&self.unit, &bi) != bi || self.multiply(&bi, &self.unit) != bi {
                unit_ok = false;
                witness = Some(format!("basis {i}"));
                break;
            }
        }
        report.record("hopf.unit", unit_ok, witness);

        // coassociativity: expand first vs second leg of Delta
        let mut co_ok = true;
        let mut witness = None;
        for i in 0..d {
            let bi = Element::basis(self.level, d, i);
            let left = self.coproduct_iter(&bi, 2); // (Delta x id) Delta
            // (id x Delta) Delta
            let mut right = TensorN::zero(self.level, vec![d, d, d]);
            for ((p, q), v) in &self.coprod[i].entries {
                for ((r, s), w) in &self.coprod[*q].entries {
                    right.add_entry(vec![*p, *r, *s], &(v * w));
                }
            }
            if left != right {
                co_ok = false;
                witness = Some(format!("basis {i}"));
                break;
            }
        }
        report.record("hopf.coassociativity", co_ok, witness);

        // counit axiom
        let mut counit_ok = true;
        let mut witness = None;
        for i in 0..d {
            let mut left = Element::zero(self.level, d);
            let mut right = Element::zero(self.level, d);
            for ((p, q), v) in &self.coprod[i].entries {
                left.coeffs[*q] += &(&self.counit[*p] * v);
                right.coeffs[*p] += &(&self.counit[*q] * v);
            }
            let bi = Element::basis(self.level, d, i);
            if left != bi || right != bi {
                counit_ok = false;
                witness = Some(format!("basis {i}"));
                break;
            }
        }
        report.record("hopf.counit", counit_ok, witness);

        // bialgebra compatibility: Delta and counit are algebra maps
        let mut bi_ok = true;
        let mut witness = None;
        'bi: for i in 0..d {
            for j in 0..d {
                let bi = Element::basis(self.level, d, i);
                let bj = Element::basis(self.level, d, j);
                let lhs = self.coproduct(&self.multiply(&bi, &bj));
                let rhs = self.tensor2_mul(&self.coprod[i], &self.coprod[j]);
                if lhs != rhs {
                    bi_ok = false;
                    witness = Some(format!("basis pair ({i},{j})"));
                    break 'bi;
                }
                let le = self.counit_of(&self.multiply(&bi, &bj));
                let re = &self.counit[i] * &self.counit[j];
                if le != re {
                    bi_ok = false;
                    witness = Some(format!("counit on pair ({i},{j})"));
                    break 'bi;
                }
            }
        }
        if bi_ok {
            if self.coproduct(&self.unit) != self.unit_tensor2() {
                bi_ok = false;
                witness = Some("Delta(1) != 1x1".into());
            } else if !self.counit_of(&self.unit).is_one() {
                bi_ok = false;
                witness = Some("eps(1) != 1".into());
            }
        }
        report.record("hopf.bialgebra", bi_ok, witness);

        // antipode identity m(S x id)Delta = unit*eps = m(id x S)Delta
        let mut anti_ok = true;
        let mut witness = None;
        for i in 0..d {
            let mut left = Element::zero(self.level, d);
            let mut right = Element::zero(self.level, d);
            for ((p, q), v) in &self.coprod[i].entries {
                let sp = self.apply_antipode(&Element::basis(self.level, d, *p));
                let sq = self.apply_antipode(&Element::basis(self.level, d, *q));
                let bq = Element::basis(self.level, d, *q);
                let bp = Element::basis(self.level, d, *p);
                left = left.add(&self.multiply(&sp, &bq).scale(v));
                right = right.add(&self.multiply(&bp, &sq).scale(v));
            }
            let expect = self.unit.scale(&self.counit[i]);
            if left != expect || right != expect {
                anti_ok = false;
                witness = Some(format!("basis {i}"));
                break;
            }
        }
        report.record("hopf.antipode", anti_ok, witness);

        // stored antipode inverse
        let id = SparseMat::identity(self.level, d);
        let inv_ok = self.antipode_inv.mul(&self.antipode) == id
            && self.antipode.mul(&self.antipode_inv) == id;
        report.record("hopf.antipode_inverse", inv_ok, None);

        report
    }

    /// The dual Hopf algebra O(H) as structure tensors on the dual basis.
    pub fn dual_structure(&self) -> HopfData {
        let d = self.dim;
        // product of O(H): (e^i e^j)(b_k) = Delta(b_k)_{ij}
        let mut mult = vec![vec![Vec::new(); d]; d];
        for k in 0..d {
            for ((i, j), v) in &self.coprod[k].entries {
                mult[*i][*j].push((k, v.clone()));
            }
        }
        for row in &mut mult {
            for cell in row {
                cell.sort_by_key(|(k, _)| *k);
            }
        }
        // coproduct of O(H): Delta(e^k) = sum_{ij} (b_i b_j)_k e^i x e^j
        let mut coprod = vec![Tensor2::zero(self.level, d); d];
        for i in 0..d {
            for j in 0..d {
                for (k, v) in &self.mult[i][j] {
                    coprod[*k].add_entry(i, j, v);
                }
            }
        }
        let unit = Element { coeffs: self.counit.clone() };
        let counit = self.unit.coeffs.clone();
        HopfData {
            level: self.level,
            dim: d,
            mult,
            unit,
            coprod,
            counit,
            antipode: self.antipode.transpose(),
            antipode_inv: self.antipode_inv.transpose(),
        }
    }

    /// Right and left integrals on H, solved exactly as a linear system.
    ///
    /// The right integral is normalized so its first nonzero coordinate is 1;
    /// the left integral is mu_r composed with the antipode.
    pub fn integrals(&self) -> Result<(Functional, Functional)> {
        let d = self.dim;
        // mu * e^j = e^j(1) mu for all j; unknown mu has d coordinates.
        let mut sys = SparseMat::zeros(self.level, d * d, d);
        for k in 0..d {
            for ((a, b), v) in &self.coprod[k].entries {
                sys.add_entry(k * d + b, *a, v);
            }
            for j in 0..d {
                let e1 = &self.unit.coeffs[j];
                if !e1.is_zero() {
                    sys.add_entry(k * d + j, k, &-e1);
                }
            }
        }
        let ns = sys.nullspace();
        if ns.len() != 1 {
            return Err(Error::Structural(format!(
                "right integral space has dimension {} (expected 1)",
                ns.len()
            )));
        }
        let mut mu_r = Functional { coeffs: ns.into_iter().next().unwrap() };
        let lead = mu_r
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero integral")
            .clone();
        let lead_inv = lead.inv()?;
        mu_r = mu_r.scale(&lead_inv);
        // mu_l = mu_r o S
        let mu_l = Functional { coeffs: self.antipode.transpose().mul_vec(&mu_r.coeffs) };
        Ok((mu_r, mu_l))
    }

    /// The left regular representation.
    pub fn regular_rep(&self) -> Rep {
        let d = self.dim;
        let mut action = Vec::with_capacity(d);
        for k in 0..d {
            let mut m = SparseMat::zeros(self.level, d, d);
            for c in 0..d {
                for (r, v) in &self.mult[k][c] {
                    m.add_entry(*r, c, v);
                }
            }
            action.push(m);
        }
        Rep { dim: d, action }
    }

    /// The one-dimensional trivial representation (the counit).
    pub fn trivial_rep(&self) -> Rep {
        let action = self
            .counit
            .iter()
            .map(|c| {
                let mut m = SparseMat::zeros(self.level, 1, 1);
                m.add_entry(0, 0, c);
                m
            })
            .collect();
        Rep { dim: 1, action }
    }

    pub fn tensor_rep(&self, i: &Rep, j: &Rep) -> Rep {
        let mut action = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let mut m = SparseMat::zeros(self.level, i.dim * j.dim, i.dim * j.dim);
            for ((p, q), v) in &self.coprod[k].entries {
                m = m.add(&i.action[*p].kron(&j.action[*q]).scale(v));
            }
            action.push(m);
        }
        Rep { dim: i.dim * j.dim, action }
    }

    pub fn dual_rep(&self, i: &Rep) -> Rep {
        let mut action = Vec::with_capacity(self.dim);
        for k in 0..self.dim {
            let sk = self.apply_antipode(&Element::basis(self.level, self.dim, k));
            action.push(i.act(&sk).transpose());
        }
        Rep { dim: i.dim, action }
    }

    /// Checks that a Rep respects multiplication and unit.
    pub fn verify_rep(&self, rep: &Rep) -> Report {
        let mut report = Report::new();
        let mut mult_ok = true;
        let mut witness = None;
        'outer: for i in 0..self.dim {
            for j in 0..self.dim {
                let mut rhs = SparseMat::zeros(self.level, rep.dim, rep.dim);
                for (k, v) in &self.mult[i][j] {
                    rhs = rhs.add(&rep.action[*k].scale(v));
                }
                if rep.action[i].mul(&rep.action[j]) != rhs {
                    mult_ok = false;
                    witness = Some(format!("pair ({i},{j})"));
                    break 'outer;
                }
            }
        }
        report.record("rep.multiplicative", mult_ok, witness);
        report.record("rep.unit", rep.act(&self.unit) == SparseMat::identity(self.level, rep.dim), None);
        report
    }

    /// Writes f as a combination of regular-representation matrix coefficients.
    ///
    /// Returns sparse coefficients c\[r\]\[c\] with sum c * T^r_c = f; the
    /// system is underdetermined and the particular solution is fixed by the
    /// pivot column order (lexicographic by default, reversed if `reverse`).
    pub fn express_functional_in_regular_coeffs(
        &self,
        f: &Functional,
        reverse_pivots: bool,
    ) -> Vec<(usize, usize, Scalar)> {
        let d = self.dim;
        let reg = self.regular_rep();
        // equations over k: sum_{r,c} coeff[(r,c)] T^r_c(b_k) = f_k
        let mut sys = SparseMat::zeros(self.level, d, d * d);
        for k in 0..d {
            for r in 0..d {
                for c in 0..d {
                    if let Some(v) = reg.action[k].get(r, c) {
                        sys.add_entry(k, r * d + c, v);
                    }
                }
            }
        }
        let order: Vec<usize> = if reverse_pivots {
            (0..d * d).rev().collect()
        } else {
            (0..d * d).collect()
        };
        let sol = sys
            .solve(&f.coeffs, Some(&order))
            .expect("regular matrix coefficients span the dual");
        sol.into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i / d, i % d, v))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{drinfeld_double, group_algebra, FiniteGroupTable};

    fn z2() -> HopfData {
        group_algebra(&FiniteGroupTable::cyclic(2), 1).unwrap().hopf
    }

    #[test]
    fn group_algebra_multiplication() {
        let h = z2();
        let e = Element::basis(1, 2, 0);
        let g = Element::basis(1, 2, 1);
        assert_eq!(h.multiply(&h.unit, &g), g);
        assert_eq!(h.multiply(&g, &g), e);
    }

    #[test]
    fn double_multiplication_matches_naive_contraction() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(3), 1).unwrap();
        let h = &r.hopf;
        // pseudo-random but deterministic elements
        let mk = |seed: u64| {
            let mut state = seed;
            let mut e = Element::zero(h.level, h.dim);
            for k in 0..h.dim {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                e.coeffs[k] = Scalar::from_int(h.level, ((state >> 33) % 7) as i64 - 3);
            }
            e
        };
        let x = mk(17);
        let y = mk(99);
        let fast = h.multiply(&x, &y);
        // independent dense contraction
        let mut slow = Element::zero(h.level, h.dim);
        for i in 0..h.dim {
            for j in 0..h.dim {
                for k in 0..h.dim {
                    let c = h.mult[i][j]
                        .iter()
                        .find(|(r, _)| *r == k)
                        .map(|(_, v)| v.clone())
                        .unwrap_or_else(|| Scalar::zero(h.level));
                    slow.coeffs[k] += &(&(&x.coeffs[i] * &y.coeffs[j]) * &c);
                }
            }
        }
        assert_eq!(fast, slow);
    }

    #[test]
    fn coproduct_iter_unit_and_counit_reduction() {
        let h = z2();
        let one = h.unit.clone();
        let t = h.coproduct_iter(&one, 1);
        assert_eq!(t, h.unit_tensor2().to_tensor_n());
        let g = Element::basis(1, 2, 1);
        let tg = h.coproduct_iter(&g, 1);
        let reduced = h.contract_counit(&tg, 0);
        let mut expect = TensorN::zero(1, vec![2]);
        expect.add_entry(vec![1], &Scalar::one(1));
        assert_eq!(reduced, expect);
    }

    #[test]
    fn coassociativity_both_orders_on_double() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(3), 1).unwrap();
        let h = &r.hopf;
        for k in 0..h.dim {
            let b = Element::basis(h.level, h.dim, k);
            let left = h.coproduct_iter(&b, 2);
            let mut right = TensorN::zero(h.level, vec![h.dim; 3]);
            for ((p, q), v) in &h.coprod[k].entries {
                for ((s, t), w) in &h.coprod[*q].entries {
                    right.add_entry(vec![*p, *s, *t], &(v * w));
                }
            }
            assert_eq!(left, right, "basis {k}");
        }
    }

    #[test]
    fn axioms_pass_and_corruption_is_caught() {
        let h = z2();
        assert!(h.verify_hopf_axioms().all_pass());
        let mut bad = h.clone();
        bad.antipode.set_entry(0, 1, Scalar::from_int(1, 1));
        bad.antipode.set_entry(1, 1, Scalar::from_int(1, 1));
        let report = bad.verify_hopf_axioms();
        assert!(!report.all_pass());
        assert!(report.failures().iter().any(|c| c.witness.is_some() || !c.passed()));
    }

    #[test]
    fn axioms_pass_for_s3_double() {
        let r = drinfeld_double(&FiniteGroupTable::symmetric3(), 1).unwrap();
        assert!(r.hopf.verify_hopf_axioms().all_pass());
    }

    #[test]
    fn dual_structure_is_a_hopf_algebra() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(2), 1).unwrap();
        let dual = r.hopf.dual_structure();
        assert!(dual.verify_hopf_axioms().all_pass());
        // counit of O(H) evaluated on a functional phi is phi(1_H)
        for k in 0..r.hopf.dim {
            assert_eq!(dual.counit[k], r.hopf.unit.coeffs[k]);
        }
    }

    #[test]
    fn integrals_of_small_group_algebra() {
        // For C[Z/2] the right integral system solved by hand gives the
        // dual-basis functional supported on the identity.
        let h = z2();
        let (mu_r, mu_l) = h.integrals().unwrap();
        assert_eq!(mu_r.coeffs, vec![Scalar::one(1), Scalar::zero(1)]);
        // group algebras are involutive: mu_l = mu_r o S = mu_r here
        assert_eq!(mu_l, mu_r);
    }

    #[test]
    fn regular_rep_spans_dual() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(2), 1).unwrap();
        let h = &r.hopf;
        let reg = h.regular_rep();
        assert!(h.verify_rep(&reg).all_pass());
        assert_eq!(reg.act(&h.unit), SparseMat::identity(h.level, h.dim));
        // the d^2 matrix coefficients have rank d
        let d = h.dim;
        let mut m = SparseMat::zeros(h.level, d * d, d);
        for r_i in 0..d {
            for c in 0..d {
                let f = reg.matrix_coefficient(h, r_i, c);
                for (k, v) in f.coeffs.iter().enumerate() {
                    if !v.is_zero() {
                        m.add_entry(r_i * d + c, k, v);
                    }
                }
            }
        }
        assert_eq!(m.rank(), d);
        // trivial rep acts by the counit
        let triv = h.trivial_rep();
        for k in 0..d {
            assert_eq!(triv.action[k].get(0, 0).cloned().unwrap_or_else(|| Scalar::zero(h.level)), h.counit[k]);
        }
    }

    #[test]
    fn tensor_and_dual_reps() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(2), 1).unwrap();
        let h = &r.hopf;
        let reg = h.regular_rep();
        let triv = h.trivial_rep();
        let t = h.tensor_rep(&triv, &reg);
        assert!(h.verify_rep(&t).all_pass());
        assert_eq!(t.dim, reg.dim);
        for k in 0..h.dim {
            assert_eq!(t.action[k], reg.action[k], "trivial x I = I");
        }
        let dd = h.dual_rep(&h.dual_rep(&reg));
        assert!(h.verify_rep(&dd).all_pass());
        // double dual acts by S^2
        for k in 0..h.dim {
            let s2 = h.apply_antipode(&h.apply_antipode(&Element::basis(h.level, h.dim, k)));
            assert_eq!(dd.action[k], reg.act(&s2));
        }
        assert_eq!(h.tensor_rep(&reg, &reg).dim, reg.dim * reg.dim);
    }

    #[test]
    fn matrix_coefficients_satisfy_dual_product_law() {
        // <fg, x> = f(x') g(x''): coefficients of a tensor product multiply
        let r = drinfeld_double(&FiniteGroupTable::cyclic(3), 1).unwrap();
        let h = &r.hopf;
        let reg = h.regular_rep();
        let tens = h.tensor_rep(&reg, &reg);
        let n = reg.dim;
        for (a, b, c, e) in [(0usize, 1usize, 2usize, 0usize), (1, 1, 0, 2), (2, 0, 1, 1)] {
            let f = reg.matrix_coefficient(h, a, b);
            let g = reg.matrix_coefficient(h, c, e);
            let prod = h.functional_mul(&f, &g);
            let coeff = tens.matrix_coefficient(h, a * n + c, b * n + e);
            assert_eq!(prod, coeff, "({a},{b},{c},{e})");
        }
    }

    #[test]
    fn express_functional_reproduces_input() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(2), 1).unwrap();
        let h = &r.hopf;
        let reg = h.regular_rep();
        let check = |f: &Functional| {
            for reverse in [false, true] {
                let coeffs = h.express_functional_in_regular_coeffs(f, reverse);
                let mut back = Functional::zero(h.level, h.dim);
                for (r_i, c, v) in &coeffs {
                    back = back.add(&reg.matrix_coefficient(h, *r_i, *c).scale(v));
                }
                assert_eq!(&back, f);
            }
        };
        check(&h.counit_functional());
        let (_, mu_l) = h.integrals().unwrap();
        check(&mu_l);
    }
}
