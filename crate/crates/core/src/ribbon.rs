//! Quasitriangular and ribbon structure: R-matrix validation, Drinfeld
//! element, ribbon and pivotal elements, factorizability, L-matrices and the
//! integral expansion of the inverse ribbon element.

use crate::error::{Error, Result};
use crate::hopf::{Element, Functional, HopfData, Rep, Tensor2, TensorN};
use crate::linalg::SparseMat;
use crate::report::Report;
use crate::scalar::Scalar;

/// A factorizable ribbon Hopf algebra with all derived data materialized.
#[derive(Clone, Debug)]
pub struct RibbonHopf {
    pub hopf: HopfData,
    pub r_mat: Tensor2,
    pub r_inv: Tensor2,
    pub v: Element,
    pub v_inv: Element,
    pub u: Element,
    pub u_inv: Element,
    /// The canonical pivotal element u v^{-1} (named piv to avoid clashing
    /// with the genus) and its inverse.
    pub piv: Element,
    pub piv_inv: Element,
    pub mu_r: Functional,
    pub mu_l: Functional,
}

impl RibbonHopf {
    /// Assembles the derived data from a verified Hopf datum, an R-matrix and
    /// a ribbon element. `r_inv` is computed by an exact linear solve when not
    /// supplied; both paths are validated by R R^{-1} = 1 x 1.
    pub fn build(
        hopf: HopfData,
        r_mat: Tensor2,
        r_inv: Option<Tensor2>,
        v: Element,
    ) -> Result<RibbonHopf> {
        let d = hopf.dim;
        let level = hopf.level;
        let r_inv = match r_inv {
            Some(ri) => ri,
            None => {
                // solve (left multiplication by R on H x H) x = 1 x 1
                let mut m = SparseMat::zeros(level, d * d, d * d);
                for ((i, j), c) in &r_mat.entries {
                    for k in 0..d {
                        for l in 0..d {
                            for (p, cp) in hopf.multiply_basis(*i, k) {
                                for (q, cq) in hopf.multiply_basis(*j, l) {
                                    m.add_entry(p * d + q, k * d + l, &(&(c * cp) * cq));
                                }
                            }
                        }
                    }
                }
                let one = hopf.unit_tensor2();
                let mut rhs = vec![Scalar::zero(level); d * d];
                for ((i, j), c) in &one.entries {
                    rhs[i * d + j] = c.clone();
                }
                let x = m.solve(&rhs, None).ok_or(Error::NotInvertible)?;
                let mut t = Tensor2::zero(level, d);
                for (idx, cv) in x.into_iter().enumerate() {
                    t.add_entry(idx / d, idx % d, &cv);
                }
                t
            }
        };
        let one2 = hopf.unit_tensor2();
        if hopf.tensor2_mul(&r_mat, &r_inv) != one2 || hopf.tensor2_mul(&r_inv, &r_mat) != one2 {
            return Err(Error::Verification {
                check: "quasitriangular.r_invertible".into(),
                witness: "R R^{-1} != 1 x 1".into(),
            });
        }
        // Drinfeld element by the primary formula u = S(b_i) a_i.
        let mut u = Element::zero(level, d);
        for ((p, q), c) in &r_mat.entries {
            let sbq = hopf.apply_antipode(&Element::basis(level, d, *q));
            u = u.add(&hopf.multiply(&sbq, &Element::basis(level, d, *p)).scale(c));
        }
        // u^{-1} = S^{-2}(b_i) a_i.
        let mut u_inv = Element::zero(level, d);
        for ((p, q), c) in &r_mat.entries {
            let s2 = hopf.apply_antipode_inv(&hopf.apply_antipode_inv(&Element::basis(level, d, *q)));
            u_inv = u_inv.add(&hopf.multiply(&s2, &Element::basis(level, d, *p)).scale(c));
        }
        if hopf.multiply(&u, &u_inv) != hopf.unit {
            return Err(Error::Verification {
                check: "ribbon.drinfeld_element".into(),
                witness: "u u^{-1} != 1".into(),
            });
        }
        // v^{-1} by exact solve against left multiplication by v.
        let reg = hopf.regular_rep();
        let mv = reg.act(&v);
        let v_inv = Element {
            coeffs: mv.solve(&hopf.unit.coeffs, None).ok_or_else(|| Error::Verification {
                check: "ribbon.v_invertible".into(),
                witness: "ribbon candidate is not invertible".into(),
            })?,
        };
        let piv = hopf.multiply(&u, &v_inv);
        let piv_inv = hopf.multiply(&v, &u_inv);
        let (mu_r, mu_l) = hopf.integrals()?;
        Ok(RibbonHopf {
            hopf,
            r_mat,
            r_inv,
            v,
            v_inv,
            u,
            u_inv,
            piv,
            piv_inv,
            mu_r,
            mu_l,
        })
    }

    pub fn level(&self) -> u32 {
        self.hopf.level
    }

    pub fn dim(&self) -> usize {
        self.hopf.dim
    }

    /// R' = flip(R).
    pub fn r_prime(&self) -> Tensor2 {
        self.r_mat.swap()
    }

    /// (R')^{-1} = flip(R^{-1}).
    pub fn r_prime_inv(&self) -> Tensor2 {
        self.r_inv.swap()
    }

    /// The signed R-matrix: R^{(+)} = R, R^{(-)} = R'^{-1}.
    pub fn r_signed(&self, plus: bool) -> Tensor2 {
        if plus {
            self.r_mat.clone()
        } else {
            self.r_prime_inv()
        }
    }

    pub fn r_signed_inv(&self, plus: bool) -> Tensor2 {
        if plus {
            self.r_inv.clone()
        } else {
            self.r_prime()
        }
    }

    /// The monodromy RR' = X_i x Y_i.
    pub fn rr_prime(&self) -> Tensor2 {
        self.hopf.tensor2_mul(&self.r_mat, &self.r_prime())
    }

    /// (RR')^{-1}.
    pub fn rr_prime_inv(&self) -> Tensor2 {
        self.hopf.tensor2_mul(&self.r_prime_inv(), &self.r_inv)
    }

    /// Verifies the quasitriangularity axioms and the universal exchange
    /// relations behind the L-matrix calculus.
    pub fn verify_quasitriangular(&self) -> Report {
        let h = &self.hopf;
        let d = h.dim;
        let mut report = Report::new();
        let one2 = h.unit_tensor2();
        report.record(
            "quasitriangular.r_invertible",
            h.tensor2_mul(&self.r_mat, &self.r_inv) == one2
                && h.tensor2_mul(&self.r_inv, &self.r_mat) == one2,
            None,
        );
        // (Delta x id) R = R13 R23 and (id x Delta) R = R13 R12
        let r13 = embed3(h, &self.r_mat, 0, 2);
        let r23 = embed3(h, &self.r_mat, 1, 2);
        let r12 = embed3(h, &self.r_mat, 0, 1);
        let mut lhs = TensorN::zero(h.level, vec![d, d, d]);
        for ((i, j), c) in &self.r_mat.entries {
            for ((p, q), w) in &h.coprod[*i].entries {
                lhs.add_entry(vec![*p, *q, *j], &(c * w));
            }
        }
        report.record(
            "quasitriangular.hexagon_first",
            lhs == h.tensor_n_mul(&r13, &r23),
            None,
        );
        let mut lhs2 = TensorN::zero(h.level, vec![d, d, d]);
        for ((i, j), c) in &self.r_mat.entries {
            for ((p, q), w) in &h.coprod[*j].entries {
                lhs2.add_entry(vec![*i, *p, *q], &(c * w));
            }
        }
        report.record(
            "quasitriangular.hexagon_second",
            lhs2 == h.tensor_n_mul(&r13, &r12),
            None,
        );
        // R Delta(x) = Delta^op(x) R on the basis
        let mut intertwine_ok = true;
        let mut witness = None;
        for k in 0..d {
            let lhs = h.tensor2_mul(&self.r_mat, &h.coprod[k]);
            let rhs = h.tensor2_mul(&h.coprod[k].swap(), &self.r_mat);
            if lhs != rhs {
                intertwine_ok = false;
                witness = Some(format!("basis {k}"));
                break;
            }
        }
        report.record("quasitriangular.intertwines_coproduct", intertwine_ok, witness);
        // Yang-Baxter
        let yb_l = h.tensor_n_mul(&h.tensor_n_mul(&r12, &r13), &r23);
        let yb_r = h.tensor_n_mul(&h.tensor_n_mul(&r23, &r13), &r12);
        report.record("quasitriangular.yang_baxter", yb_l == yb_r, None);
        report
    }

    /// The universal sign-pair exchange relations underlying the RLL
    /// relations, checked in H x H x H for all sign pairs.
    pub fn verify_l_matrix_relations_universal(&self) -> Report {
        let h = &self.hopf;
        let mut report = Report::new();
        for eps in [true, false] {
            for sig in [true, false] {
                let re = self.r_signed(eps);
                let rs = self.r_signed(sig);
                // R^{(eps)}_{12} R^{(eps)}_{13} R^{(sigma)}_{23} = R^{(sigma)}_{23} R^{(eps)}_{13} R^{(eps)}_{12}
                let r12 = embed3(h, &re, 0, 1);
                let r13 = embed3(h, &re, 0, 2);
                let r23 = embed3(h, &rs, 1, 2);
                let lhs = h.tensor_n_mul(&h.tensor_n_mul(&r12, &r13), &r23);
                let rhs = h.tensor_n_mul(&h.tensor_n_mul(&r23, &r13), &r12);
                report.record(
                    &format!(
                        "l_relations.mixed_{}_{}",
                        sign_name(eps),
                        sign_name(sig)
                    ),
                    lhs == rhs,
                    None,
                );
                // R^{(eps)}_{12} R^{(sigma)}_{13} R^{(sigma)}_{23} = R^{(sigma)}_{23} R^{(sigma)}_{13} R^{(eps)}_{12}
                let r13b = embed3(h, &rs, 0, 2);
                let r23b = embed3(h, &rs, 1, 2);
                let lhs2 = h.tensor_n_mul(&h.tensor_n_mul(&r12, &r13b), &r23b);
                let rhs2 = h.tensor_n_mul(&h.tensor_n_mul(&r23b, &r13b), &r12);
                report.record(
                    &format!(
                        "l_relations.same_{}_{}",
                        sign_name(eps),
                        sign_name(sig)
                    ),
                    lhs2 == rhs2,
                    None,
                );
                // fusion: (Delta x id) R^{(eps)} = R^{(eps)}_{13} R^{(eps)}_{23}
                let mut fusion = TensorN::zero(h.level, vec![h.dim; 3]);
                for ((i, j), c) in &re.entries {
                    for ((p, q), w) in &h.coprod[*i].entries {
                        fusion.add_entry(vec![*p, *q, *j], &(c * w));
                    }
                }
                let rhs3 = h.tensor_n_mul(&embed3(h, &re, 0, 2), &embed3(h, &re, 1, 2));
                report.record(
                    &format!("l_relations.fusion_{}", sign_name(eps)),
                    fusion == rhs3,
                    None,
                );
                // coproduct rule: (id x Delta) R^{(eps)} = R^{(eps)}_{13} R^{(eps)}_{12}
                let mut cop = TensorN::zero(h.level, vec![h.dim; 3]);
                for ((i, j), c) in &re.entries {
                    for ((p, q), w) in &h.coprod[*j].entries {
                        cop.add_entry(vec![*i, *p, *q], &(c * w));
                    }
                }
                let rhs4 = h.tensor_n_mul(&embed3(h, &re, 0, 2), &embed3(h, &re, 0, 1));
                report.record(
                    &format!("l_relations.coproduct_{}", sign_name(eps)),
                    cop == rhs4,
                    None,
                );
            }
        }
        report
    }

    /// Ribbon, Drinfeld-element and pivotal identities.
    pub fn verify_ribbon(&self) -> Report {
        let h = &self.hopf;
        let d = h.dim;
        let level = h.level;
        let mut report = Report::new();

        // u agreement: S(b_i)a_i = b_i S^{-1}(a_i)
        let mut u_alt = Element::zero(level, d);
        for ((p, q), c) in &self.r_mat.entries {
            let s_inv = h.apply_antipode_inv(&Element::basis(level, d, *p));
            u_alt = u_alt.add(&h.multiply(&Element::basis(level, d, *q), &s_inv).scale(c));
        }
        report.record("ribbon.u_formulas_agree", u_alt == self.u, None);
        // u^{-1} agreement: S^{-1}(b_i) S(a_i) and b_i S^2(a_i)
        let mut ui_alt1 = Element::zero(level, d);
        let mut ui_alt2 = Element::zero(level, d);
        for ((p, q), c) in &self.r_mat.entries {
            let sbq = h.apply_antipode_inv(&Element::basis(level, d, *q));
            let sap = h.apply_antipode(&Element::basis(level, d, *p));
            ui_alt1 = ui_alt1.add(&h.multiply(&sbq, &sap).scale(c));
            let s2 = h.apply_antipode(&sap);
            ui_alt2 = ui_alt2.add(&h.multiply(&Element::basis(level, d, *q), &s2).scale(c));
        }
        report.record(
            "ribbon.u_inverse_formulas_agree",
            ui_alt1 == self.u_inv && ui_alt2 == self.u_inv,
            None,
        );
        report.record("ribbon.u_invertible", h.multiply(&self.u, &self.u_inv) == h.unit, None);

        // v central
        let mut central = true;
        let mut witness = None;
        for k in 0..d {
            let b = Element::basis(level, d, k);
            if h.multiply(&self.v, &b) != h.multiply(&b, &self.v) {
                central = false;
                witness = Some(format!("basis {k}"));
                break;
            }
        }
        report.record("ribbon.v_central", central, witness);
        report.record("ribbon.v_invertible", h.multiply(&self.v, &self.v_inv) == h.unit, None);
        // v^2 = u S(u)
        let v2 = h.multiply(&self.v, &self.v);
        let usu = h.multiply(&self.u, &h.apply_antipode(&self.u));
        report.record("ribbon.v_squared", v2 == usu, None);
        // Delta(v) = (R'R)^{-1} (v x v)
        let rpr = h.tensor2_mul(&self.r_prime(), &self.r_mat);
        let rpr_inv = h.tensor2_mul(&self.r_inv, &self.r_prime_inv());
        report.record(
            "ribbon.rpr_invertible",
            h.tensor2_mul(&rpr, &rpr_inv) == h.unit_tensor2(),
            None,
        );
        let lhs = h.coproduct(&self.v);
        let rhs = h.tensor2_mul(&rpr_inv, &Tensor2::from_outer(&self.v, &self.v));
        report.record("ribbon.coproduct_v", lhs == rhs, None);
        report.record("ribbon.antipode_v", h.apply_antipode(&self.v) == self.v, None);
        report.record("ribbon.counit_v", h.counit_of(&self.v).is_one(), None);

        // pivotal element
        report.record(
            "pivot.grouplike",
            h.coproduct(&self.piv) == Tensor2::from_outer(&self.piv, &self.piv),
            None,
        );
        report.record("pivot.counit", h.counit_of(&self.piv).is_one(), None);
        let mut s2_ok = true;
        let mut witness = None;
        for k in 0..d {
            let b = Element::basis(level, d, k);
            let s2 = h.apply_antipode(&h.apply_antipode(&b));
            let conj = h.multiply(&h.multiply(&self.piv, &b), &self.piv_inv);
            if s2 != conj {
                s2_ok = false;
                witness = Some(format!("basis {k}"));
                break;
            }
        }
        report.record("pivot.implements_s_squared", s2_ok, witness);
        report
    }

    /// Integral identities, including those requiring the pivotal element.
    pub fn verify_integrals(&self) -> Report {
        let h = &self.hopf;
        let d = h.dim;
        let level = h.level;
        let mut report = Report::new();

        // defining properties
        let mut right_ok = true;
        let mut left_ok = true;
        for j in 0..d {
            let phi = Functional::dual_basis(level, d, j);
            let lhs = h.functional_mul(&self.mu_r, &phi);
            let rhs = self.mu_r.scale(&phi.eval(&h.unit));
            if lhs != rhs {
                right_ok = false;
            }
            let lhs2 = h.functional_mul(&phi, &self.mu_l);
            let rhs2 = self.mu_l.scale(&phi.eval(&h.unit));
            if lhs2 != rhs2 {
                left_ok = false;
            }
        }
        report.record("integral.right_defining", right_ok, None);
        report.record("integral.left_defining", left_ok, None);

        // mu_r(h ?) phi = mu_r(h' ?) phi(S^{-1}(h''))
        let mut shifted_ok = true;
        let mut witness = None;
        'outer: for k in 0..d {
            let bk = Element::basis(level, d, k);
            for j in 0..d {
                let phi = Functional::dual_basis(level, d, j);
                let lhs = h.functional_mul(&h.shift_left(&self.mu_r, &bk), &phi);
                let mut rhs = Functional::zero(level, d);
                for ((p, q), c) in &h.coprod[k].entries {
                    let hp = Element::basis(level, d, *p);
                    let s_inv = h.apply_antipode_inv(&Element::basis(level, d, *q));
                    let scale = &phi.eval(&s_inv) * c;
                    rhs = rhs.add(&h.shift_left(&self.mu_r, &hp).scale(&scale));
                }
                if lhs != rhs {
                    shifted_ok = false;
                    witness = Some(format!("basis h={k}, phi={j}"));
                    break 'outer;
                }
            }
        }
        report.record("integral.shifted_product", shifted_ok, witness);

        // mu_l = mu_r(piv^2 ?)
        let piv2 = h.multiply(&self.piv, &self.piv);
        report.record(
            "integral.left_from_right_pivot",
            self.mu_l == h.shift_left(&self.mu_r, &piv2),
            None,
        );

        // quasi-cyclicity on all basis pairs
        let mut qc_ok = true;
        let mut witness = None;
        'qc: for i in 0..d {
            for j in 0..d {
                let bi = Element::basis(level, d, i);
                let bj = Element::basis(level, d, j);
                let xy = h.multiply(&bi, &bj);
                let s2y = h.apply_antipode(&h.apply_antipode(&bj));
                let s2yx = h.multiply(&s2y, &bi);
                if self.mu_r.eval(&xy) != self.mu_r.eval(&s2yx) {
                    qc_ok = false;
                    witness = Some(format!("mu_r pair ({i},{j})"));
                    break 'qc;
                }
                let s2inv_y = h.apply_antipode_inv(&h.apply_antipode_inv(&bj));
                let s2invyx = h.multiply(&s2inv_y, &bi);
                if self.mu_l.eval(&xy) != self.mu_l.eval(&s2invyx) {
                    qc_ok = false;
                    witness = Some(format!("mu_l pair ({i},{j})"));
                    break 'qc;
                }
            }
        }
        report.record("integral.quasi_cyclic", qc_ok, witness);

        // symmetrized forms: mu_r(g x y) = mu_r(g y x), mu_l(g^{-1} x y) = mu_l(g^{-1} y x)
        let mut sym_ok = true;
        let mut witness = None;
        'sym: for i in 0..d {
            for j in 0..d {
                let bi = Element::basis(level, d, i);
                let bj = Element::basis(level, d, j);
                let gxy = h.multiply(&self.piv, &h.multiply(&bi, &bj));
                let gyx = h.multiply(&self.piv, &h.multiply(&bj, &bi));
                if self.mu_r.eval(&gxy) != self.mu_r.eval(&gyx) {
                    sym_ok = false;
                    witness = Some(format!("mu_r pair ({i},{j})"));
                    break 'sym;
                }
                let gixy = h.multiply(&self.piv_inv, &h.multiply(&bi, &bj));
                let giyx = h.multiply(&self.piv_inv, &h.multiply(&bj, &bi));
                if self.mu_l.eval(&gixy) != self.mu_l.eval(&giyx) {
                    sym_ok = false;
                    witness = Some(format!("mu_l pair ({i},{j})"));
                    break 'sym;
                }
            }
        }
        report.record("integral.pivot_symmetrized", sym_ok, witness);
        report
    }

    /// Identities for iterated coproducts of the R-matrix used by the
    /// closed-form holonomy expressions.
    pub fn verify_r_coproduct_expansions(&self) -> Report {
        let h = &self.hopf;
        let d = h.dim;
        let mut report = Report::new();
        // X_i x Y_i' x Y_i'' = a_j X_i b_k x Y_i x b_j a_k
        let rr = self.rr_prime();
        let mut lhs = TensorN::zero(h.level, vec![d, d, d]);
        for ((x, y), c) in &rr.entries {
            for ((p, q), w) in &h.coprod[*y].entries {
                lhs.add_entry(vec![*x, *p, *q], &(c * w));
            }
        }
        let mut rhs = TensorN::zero(h.level, vec![d, d, d]);
        for ((aj, bj), c1) in &self.r_mat.entries {
            for ((x, y), c2) in &rr.entries {
                for ((ak, bk), c3) in &self.r_mat.entries {
                    // a_j X_i b_k x Y_i x b_j a_k
                    let first = h.multiply_all(&[
                        &Element::basis(h.level, d, *aj),
                        &Element::basis(h.level, d, *x),
                        &Element::basis(h.level, d, *bk),
                    ]);
                    let third = h.multiply(
                        &Element::basis(h.level, d, *bj),
                        &Element::basis(h.level, d, *ak),
                    );
                    let c = &(c1 * c2) * c3;
                    for (f, fv) in first.support() {
                        for (t, tv) in third.support() {
                            rhs.add_entry(vec![f, *y, t], &(&(&c * fv) * tv));
                        }
                    }
                }
            }
        }
        report.record("r_expansion.monodromy_coproduct", lhs == rhs, None);

        // (id x Delta^{(n-1)})(R) = a_{i1}...a_{in} x b_{in} x ... x b_{i1}, n = 2, 3
        for n in [2usize, 3] {
            let mut lhs = TensorN::zero(h.level, vec![d; n + 1]);
            for ((a, b), c) in &self.r_mat.entries {
                let db = h.coproduct_iter(&Element::basis(h.level, d, *b), n - 1);
                for (idx, w) in &db.entries {
                    let mut full = Vec::with_capacity(n + 1);
                    full.push(*a);
                    full.extend_from_slice(idx);
                    lhs.add_entry(full, &(c * w));
                }
            }
            let rhs = self.iterated_r_product(n);
            report.record(&format!("r_expansion.iterated_{n}"), lhs == rhs, None);
        }
        report
    }

    /// sum a_{i1}...a_{in} x b_{in} x ... x b_{i1} built from n-fold products.
    fn iterated_r_product(&self, n: usize) -> TensorN {
        let h = &self.hopf;
        let d = h.dim;
        // accumulate terms (a-product element, [b legs from last to first])
        let mut terms: Vec<(Element, Vec<usize>, Scalar)> = vec![(
            h.unit.clone(),
            Vec::new(),
            Scalar::one(h.level),
        )];
        for _ in 0..n {
            let mut next = Vec::new();
            for (a_acc, legs, coeff) in &terms {
                for ((a, b), c) in &self.r_mat.entries {
                    let na = h.multiply(a_acc, &Element::basis(h.level, d, *a));
                    let mut nl = vec![*b];
                    nl.extend_from_slice(legs);
                    next.push((na, nl, coeff * c));
                }
            }
            terms = next;
        }
        let mut out = TensorN::zero(h.level, vec![d; n + 1]);
        for (a_acc, legs, coeff) in terms {
            for (k, av) in a_acc.support() {
                let mut idx = Vec::with_capacity(n + 1);
                idx.push(k);
                idx.extend_from_slice(&legs);
                out.add_entry(idx, &(&coeff * av));
            }
        }
        out
    }

    /// Drinfeld map phi -> (phi x id)(RR') as a d x d matrix over the field,
    /// columns indexed by the dual basis.
    pub fn drinfeld_matrix(&self) -> SparseMat {
        let h = &self.hopf;
        let d = h.dim;
        let rr = self.rr_prime();
        let mut m = SparseMat::zeros(h.level, d, d);
        for ((i, j), c) in &rr.entries {
            m.add_entry(*j, *i, c);
        }
        m
    }

    pub fn drinfeld_map(&self, f: &Functional) -> Element {
        Element { coeffs: self.drinfeld_matrix().mul_vec(&f.coeffs) }
    }

    /// Inverse Drinfeld map; requires factorizability.
    pub fn drinfeld_inverse(&self, x: &Element) -> Result<Functional> {
        let m = self.drinfeld_matrix();
        let coeffs = m.solve(&x.coeffs, None).ok_or_else(|| Error::Structural(
            "element is not in the image of the Drinfeld map".into(),
        ))?;
        Ok(Functional { coeffs })
    }

    /// Returns (factorizable, rank of the Drinfeld map).
    pub fn factorizability_check(&self) -> (bool, usize) {
        let rank = self.drinfeld_matrix().rank();
        (rank == self.hopf.dim, rank)
    }

    /// The matrices L^{(+)}, L^{(-)} with entries in H for a module I.
    pub fn l_matrices(&self, rep: &Rep) -> (ElemMat, ElemMat) {
        (self.l_signed(rep, true), self.l_signed(rep, false))
    }

    pub fn l_signed(&self, rep: &Rep, plus: bool) -> ElemMat {
        let r = self.r_signed(plus);
        ElemMat::from_tensor(&self.hopf, rep, &r)
    }

    /// L^{(eps)-1}, using that the inverse comes from the inverse R-matrix.
    pub fn l_signed_inv(&self, rep: &Rep, plus: bool) -> ElemMat {
        let r = self.r_signed_inv(plus);
        ElemMat::from_tensor(&self.hopf, rep, &r)
    }

    /// Numeric matrix of R^{(eps)} evaluated in two modules.
    pub fn r_hat(&self, i: &Rep, j: &Rep, plus: bool) -> SparseMat {
        self.eval_tensor(i, j, &self.r_signed(plus))
    }

    pub fn r_hat_inv(&self, i: &Rep, j: &Rep, plus: bool) -> SparseMat {
        self.eval_tensor(i, j, &self.r_signed_inv(plus))
    }

    /// (T_I x T_J)(t) for a 2-tensor t.
    pub fn eval_tensor(&self, i: &Rep, j: &Rep, t: &Tensor2) -> SparseMat {
        let mut out = SparseMat::zeros(self.level(), i.dim * j.dim, i.dim * j.dim);
        for ((p, q), c) in &t.entries {
            out = out.add(&i.action[*p].kron(&j.action[*q]).scale(c));
        }
        out
    }

    /// The functional mu^l(v)^{-1} mu^l(v ?) whose Drinfeld image is v^{-1}.
    pub fn v_inverse_functional(&self) -> Result<Functional> {
        let mu_l_v = self.mu_l.eval(&self.v);
        if mu_l_v.is_zero() {
            return Err(Error::Structural(
                "mu_l(v) = 0 contradicts the factorizable ribbon assumptions".into(),
            ));
        }
        let shifted = self.hopf.shift_left(&self.mu_l, &self.v);
        Ok(shifted.scale(&mu_l_v.inv()?))
    }

    /// Regular-coefficient expansion of v^{-1} (fixed lexicographic pivots).
    pub fn v_inverse_coefficients(&self) -> Result<Vec<(usize, usize, Scalar)>> {
        let f = self.v_inverse_functional()?;
        Ok(self.hopf.express_functional_in_regular_coeffs(&f, false))
    }
}

impl RibbonHopf {
    /// The complete structural battery: Hopf axioms, quasitriangularity, the
    /// universal L-matrix relations, R-coproduct expansions, ribbon/pivotal
    /// identities, integral identities and the factorizability rank.
    pub fn verify_full(&self) -> Report {
        let mut report = self.hopf.verify_hopf_axioms();
        report.merge(self.verify_quasitriangular());
        report.merge(self.verify_l_matrix_relations_universal());
        report.merge(self.verify_r_coproduct_expansions());
        report.merge(self.verify_ribbon());
        report.merge(self.verify_integrals());
        let (fact, rank) = self.factorizability_check();
        report.record(
            "factorizability.full_rank",
            fact,
            Some(format!("rank {rank} of dimension {}", self.dim())),
        );
        report
    }
}

fn sign_name(plus: bool) -> &'static str {
    if plus {
        "plus"
    } else {
        "minus"
    }
}

/// Embeds a 2-tensor into legs (p, q) of H^{x3}, identity elsewhere.
fn embed3(h: &HopfData, t: &Tensor2, p: usize, q: usize) -> TensorN {
    let d = h.dim;
    let mut out = TensorN::zero(h.level, vec![d, d, d]);
    for ((i, j), c) in &t.entries {
        for (k, u) in h.unit.support() {
            let mut idx = vec![usize::MAX; 3];
            idx[p] = *i;
            idx[q] = *j;
            for slot in idx.iter_mut() {
                if *slot == usize::MAX {
                    *slot = k;
                }
            }
            out.add_entry(idx, &(c * u));
        }
    }
    out
}

/// Sparse matrix with entries in H.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ElemMat {
    pub size: usize,
    pub dim_h: usize,
    pub level: u32,
    /// rows\[r\] = sorted (col, Element) pairs.
    pub rows: Vec<Vec<(usize, Element)>>,
}

impl ElemMat {
    pub fn zero(level: u32, size: usize, dim_h: usize) -> Self {
        ElemMat { size, dim_h, level, rows: vec![Vec::new(); size] }
    }

    pub fn identity(h: &HopfData, size: usize) -> Self {
        let mut m = Self::zero(h.level, size, h.dim);
        for r in 0..size {
            m.rows[r].push((r, h.unit.clone()));
        }
        m
    }

    /// (T_I x id)(t): entry (r, c) = sum over t of rho(a-part)[r][c] * b-part.
    pub fn from_tensor(h: &HopfData, rep: &Rep, t: &Tensor2) -> Self {
        let mut m = Self::zero(h.level, rep.dim, h.dim);
        for ((a, b), c) in &t.entries {
            for (r, row) in rep.action[*a].rows().iter().enumerate() {
                for (col, v) in row {
                    let scaled = Element::basis(h.level, h.dim, *b).scale(&(v * c));
                    m.add_entry(r, *col, &scaled);
                }
            }
        }
        m
    }

    pub fn add_entry(&mut self, r: usize, c: usize, e: &Element) {
        if e.is_zero() {
            return;
        }
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => {
                row[i].1 = row[i].1.add(e);
                if row[i].1.is_zero() {
                    row.remove(i);
                }
            }
            Err(i) => row.insert(i, (c, e.clone())),
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Element> {
        self.rows[r]
            .binary_search_by_key(&c, |(col, _)| *col)
            .ok()
            .map(|i| &self.rows[r][i].1)
    }

    pub fn mul(&self, h: &HopfData, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let mut out = Self::zero(self.level, self.size, self.dim_h);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, e1) in row {
                for (c, e2) in &other.rows[*k] {
                    out.add_entry(r, *c, &h.multiply(e1, e2));
                }
            }
        }
        out
    }

    /// Left multiplication by a numeric matrix.
    pub fn scalar_mul_left(&self, m: &SparseMat) -> Self {
        assert_eq!(m.ncols(), self.size);
        let mut out = Self::zero(self.level, m.nrows(), self.dim_h);
        for (r, row) in m.rows().iter().enumerate() {
            for (k, s) in row {
                for (c, e) in &self.rows[*k] {
                    out.add_entry(r, *c, &e.scale(s));
                }
            }
        }
        out
    }

    /// Right multiplication by a numeric matrix.
    pub fn scalar_mul_right(&self, m: &SparseMat) -> Self {
        assert_eq!(self.size, m.nrows());
        let mut out = Self::zero(self.level, self.size, self.dim_h);
        for (r, row) in self.rows.iter().enumerate() {
            for (k, e) in row {
                for (c, s) in &m.rows()[*k] {
                    out.add_entry(r, *c, &e.scale(s));
                }
            }
        }
        out
    }

    /// Promotion to the first auxiliary slot of a pair (tensor with identity
    /// of size n on the right): index (r, k) = r * n + k.
    pub fn promote_first(&self, n: usize) -> Self {
        let mut out = Self::zero(self.level, self.size * n, self.dim_h);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, e) in row {
                for k in 0..n {
                    out.rows[r * n + k].push((c * n + k, e.clone()));
                }
            }
        }
        for row in &mut out.rows {
            row.sort_by_key(|(c, _)| *c);
        }
        out
    }

    /// Promotion to the second auxiliary slot: index (k, r) = k * size + r.
    pub fn promote_second(&self, m: usize) -> Self {
        let mut out = Self::zero(self.level, self.size * m, self.dim_h);
        for (r, row) in self.rows.iter().enumerate() {
            for (c, e) in row {
                for k in 0..m {
                    out.rows[k * self.size + r].push((k * self.size + c, e.clone()));
                }
            }
        }
        for row in &mut out.rows {
            row.sort_by_key(|(c, _)| *c);
        }
        out
    }

    /// Entrywise coproduct check helper: the 2-tensor Delta(entry (a, b)).
    pub fn entry_coproduct(&self, h: &HopfData, a: usize, b: usize) -> Tensor2 {
        match self.get(a, b) {
            Some(e) => h.coproduct(e),
            None => Tensor2::zero(self.level, self.dim_h),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{drinfeld_double, group_algebra, FiniteGroupTable};

    #[test]
    fn trivial_quasitriangular_group_algebra_has_u_equal_one() {
        let r = group_algebra(&FiniteGroupTable::cyclic(3), 1).unwrap();
        assert_eq!(r.u, r.hopf.unit);
        assert!(r.verify_quasitriangular().all_pass());
        assert!(r.verify_ribbon().all_pass());
        let (fact, rank) = r.factorizability_check();
        assert!(!fact);
        assert_eq!(rank, 1);
    }

    #[test]
    fn double_of_z2_is_factorizable_ribbon() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(2), 1).unwrap();
        assert!(r.verify_quasitriangular().all_pass());
        assert!(r.verify_ribbon().all_pass());
        assert!(r.verify_integrals().all_pass());
        let (fact, rank) = r.factorizability_check();
        assert!(fact);
        assert_eq!(rank, 4);
    }

    #[test]
    fn double_of_s3_passes_u_inverse_contraction() {
        let r = drinfeld_double(&FiniteGroupTable::symmetric3(), 1).unwrap();
        assert_eq!(r.hopf.multiply(&r.u, &r.u_inv), r.hopf.unit);
        let (fact, rank) = r.factorizability_check();
        assert!(fact);
        assert_eq!(rank, 36);
    }

    #[test]
    fn corrupted_ribbon_is_rejected() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(3), 1).unwrap();
        let bad_v = r.v.scale(&Scalar::from_int(1, 2));
        let bad = RibbonHopf::build(r.hopf.clone(), r.r_mat.clone(), Some(r.r_inv.clone()), bad_v)
            .unwrap();
        let report = bad.verify_ribbon();
        assert!(!report.all_pass());
        assert!(report.failures().iter().any(|c| c.name == "ribbon.v_squared"));
    }

    #[test]
    fn corrupted_r_entry_fails_quasitriangularity() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(3), 1).unwrap();
        let mut bad_r = r.r_mat.clone();
        let first = *bad_r.entries.keys().next().unwrap();
        bad_r.add_entry(first.0, first.1, &Scalar::from_int(1, 1));
        match RibbonHopf::build(r.hopf.clone(), bad_r, None, r.v.clone()) {
            Err(_) => {}
            Ok(b) => assert!(!b.verify_quasitriangular().all_pass()),
        }
    }

    #[test]
    fn l_matrix_relations_universal_and_matrix_level() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(2), 1).unwrap();
        assert!(r.verify_l_matrix_relations_universal().all_pass());
        let h = &r.hopf;
        let reg = h.regular_rep();
        // trivial rep: both L matrices are [1_H]
        let triv = h.trivial_rep();
        let (lp, lm) = r.l_matrices(&triv);
        assert_eq!(lp, ElemMat::identity(h, 1));
        assert_eq!(lm, ElemMat::identity(h, 1));
        // fusion into the tensor representation, I = J = regular
        for plus in [true, false] {
            let li = r.l_signed(&reg, plus);
            let l12 = li.promote_first(reg.dim).mul(h, &li.promote_second(reg.dim));
            let tens = h.tensor_rep(&reg, &reg);
            let lij = r.l_signed(&tens, plus);
            assert_eq!(l12, lij, "fusion sign {plus}");
        }
        // coproduct rule on entries
        let (lp, _) = r.l_matrices(&reg);
        for a in 0..reg.dim {
            for b in 0..reg.dim {
                let lhs = lp.entry_coproduct(h, a, b);
                let mut rhs = Tensor2::zero(h.level, h.dim);
                for i in 0..reg.dim {
                    if let (Some(e1), Some(e2)) = (lp.get(i, b), lp.get(a, i)) {
                        for (x, xv) in e1.support() {
                            for (y, yv) in e2.support() {
                                rhs.add_entry(x, y, &(xv * yv));
                            }
                        }
                    }
                }
                assert_eq!(lhs, rhs, "coproduct rule entry ({a},{b})");
            }
        }
    }

    #[test]
    fn rll_exchange_matrix_level_mixed_signs() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(3), 1).unwrap();
        let h = &r.hopf;
        let reg = h.regular_rep();
        let n = reg.dim;
        for (eps, sig) in [(true, false), (false, true), (true, true), (false, false)] {
            let r_eps = r.r_hat(&reg, &reg, eps);
            let l1 = r.l_signed(&reg, eps).promote_first(n);
            let l2 = r.l_signed(&reg, sig).promote_second(n);
            let lhs = l1.mul(h, &l2).scalar_mul_left(&r_eps);
            let rhs = l2.mul(h, &l1).scalar_mul_right(&r_eps);
            assert_eq!(lhs, rhs, "RLL ({eps},{sig})");
        }
    }

    #[test]
    fn r_coproduct_expansions_hold() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(2), 1).unwrap();
        assert!(r.verify_r_coproduct_expansions().all_pass());
    }

    #[test]
    fn v_inverse_expansions() {
        for n in [2usize, 3] {
            let r = drinfeld_double(&FiniteGroupTable::cyclic(n), 1).unwrap();
            let h = &r.hopf;
            // mu^l(v X_i) Y_i = mu^l(v Xbar_i) Ybar_i = mu^l(v) v^{-1}
            let f = h.shift_left(&r.mu_l, &r.v);
            let lhs1 = r.rr_prime().contract_first(&f);
            let lhs2 = r.rr_prime_inv().contract_first(&f);
            let expect = r.v_inv.scale(&r.mu_l.eval(&r.v));
            assert_eq!(lhs1, expect, "via RR', n={n}");
            assert_eq!(lhs2, expect, "via (RR')^-1, n={n}");
            // the coefficient expansion re-evaluates to the functional
            let coeffs = r.v_inverse_coefficients().unwrap();
            let reg = h.regular_rep();
            let target = r.v_inverse_functional().unwrap();
            let mut back = Functional::zero(h.level, h.dim);
            for (rr, cc, s) in &coeffs {
                back = back.add(&reg.matrix_coefficient(h, *rr, *cc).scale(s));
            }
            assert_eq!(back, target, "n={n}");
            // and its Drinfeld image is v^{-1}
            assert_eq!(r.drinfeld_map(&target), r.v_inv, "n={n}");
        }
        // trivial algebra: v^{-1} = 1 and the expansion reproduces the counit
        let t = group_algebra(&FiniteGroupTable::cyclic(1), 1).unwrap();
        let f = t.v_inverse_functional().unwrap();
        assert_eq!(f, t.hopf.counit_functional());
        assert_eq!(t.v_inv, t.hopf.unit);
    }
}
