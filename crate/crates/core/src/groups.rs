//! Built-in constructors producing validated ribbon Hopf fixtures at desk
//! scale: group algebras and Drinfeld doubles of finite groups.

use crate::error::{Error, Result};
use crate::hopf::{Element, HopfData, Tensor2};
use crate::linalg::SparseMat;
use crate::ribbon::RibbonHopf;
use crate::scalar::Scalar;

/// A finite group as a multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupTable {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
    pub inverse: Vec<usize>,
    pub identity: usize,
}

impl FiniteGroupTable {
    pub fn new(mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 || mult.iter().any(|row| row.len() != n) {
            return Err(Error::Structural("multiplication table must be square".into()));
        }
        if mult.iter().flatten().any(|&x| x >= n) {
            return Err(Error::Structural("table entry out of range".into()));
        }
        // locate the identity
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| mult[e][x] == x && mult[x][e] == x))
            .ok_or_else(|| Error::Structural("no identity element".into()))?;
        // associativity
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(Error::Structural(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        // inverses
        let mut inverse = vec![0usize; n];
        for a in 0..n {
            let inv = (0..n)
                .find(|&b| mult[a][b] == identity && mult[b][a] == identity)
                .ok_or_else(|| Error::Structural(format!("element {a} has no inverse")))?;
            inverse[a] = inv;
        }
        Ok(FiniteGroupTable { order: n, mult, inverse, identity })
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(mult).expect("cyclic groups are groups")
    }

    /// The symmetric group on three letters, as permutations of {0,1,2}
    /// enumerated in lexicographic one-line order.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let compose = |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] {
            // (p q)(x) = p(q(x))
            [p[q[0]], p[q[1]], p[q[2]]]
        };
        let index = |p: &[usize; 3]| perms.iter().position(|x| x == p).unwrap();
        let mult = perms
            .iter()
            .map(|p| perms.iter().map(|q| index(&compose(p, q))).collect())
            .collect();
        Self::new(mult).expect("S3 is a group")
    }
}

/// The group algebra C[G] with the trivial quasitriangular structure
/// R = 1 x 1 and ribbon element v = 1. Not factorizable for |G| >= 2.
pub fn group_algebra(gt: &FiniteGroupTable, level: u32) -> Result<RibbonHopf> {
    let n = gt.order;
    let one = Scalar::one(level);
    let mut mult = vec![vec![Vec::new(); n]; n];
    for a in 0..n {
        for b in 0..n {
            mult[a][b].push((gt.mult[a][b], one.clone()));
        }
    }
    let unit = Element::basis(level, n, gt.identity);
    let mut coprod = Vec::with_capacity(n);
    for g in 0..n {
        let mut t = Tensor2::zero(level, n);
        t.add_entry(g, g, &one);
        coprod.push(t);
    }
    let counit = vec![one.clone(); n];
    let mut antipode = SparseMat::zeros(level, n, n);
    for g in 0..n {
        antipode.add_entry(gt.inverse[g], g, &one);
    }
    let hopf = HopfData {
        level,
        dim: n,
        mult,
        unit: unit.clone(),
        coprod,
        counit,
        antipode: antipode.clone(),
        antipode_inv: antipode,
    };
    let axioms = hopf.verify_hopf_axioms();
    if !axioms.all_pass() {
        return Err(Error::Verification {
            check: "group_algebra.hopf_axioms".into(),
            witness: axioms.failure_summary(),
        });
    }
    let mut r = Tensor2::zero(level, n);
    r.add_entry(gt.identity, gt.identity, &one);
    let rh = RibbonHopf::build(hopf, r, None, unit)?;
    let ribbon = rh.verify_ribbon();
    if !ribbon.all_pass() {
        return Err(Error::Verification {
            check: "group_algebra.ribbon".into(),
            witness: ribbon.failure_summary(),
        });
    }
    Ok(rh)
}

/// The Drinfeld double D(G), with basis delta_x (x) y indexed by x*|G| + y.
///
/// Multiplication: (delta_x (x) y)(delta_x' (x) y') =
/// [x = y x' y^{-1}] delta_x (x) y y'. The candidate ribbon element v = u is
/// validated; the construction fails loudly if any verifier rejects it.
pub fn drinfeld_double(gt: &FiniteGroupTable, level: u32) -> Result<RibbonHopf> {
    let n = gt.order;
    let d = n * n;
    let one = Scalar::one(level);
    let idx = |x: usize, y: usize| x * n + y;

    let mut mult = vec![vec![Vec::new(); d]; d];
    for x in 0..n {
        for y in 0..n {
            for x2 in 0..n {
                for y2 in 0..n {
                    // y x2 y^{-1}
                    let conj = gt.mult[gt.mult[y][x2]][gt.inverse[y]];
                    if x == conj {
                        mult[idx(x, y)][idx(x2, y2)].push((idx(x, gt.mult[y][y2]), one.clone()));
                    }
                }
            }
        }
    }
    let mut unit = Element::zero(level, d);
    for x in 0..n {
        unit.coeffs[idx(x, gt.identity)] = one.clone();
    }
    let mut coprod = Vec::with_capacity(d);
    for x in 0..n {
        for y in 0..n {
            let mut t = Tensor2::zero(level, d);
            for a in 0..n {
                // x = a b
                let b = gt.mult[gt.inverse[a]][x];
                t.add_entry(idx(a, y), idx(b, y), &one);
            }
            coprod.push(t);
        }
    }
    let mut counit = vec![Scalar::zero(level); d];
    for y in 0..n {
        counit[idx(gt.identity, y)] = one.clone();
    }
    let mut antipode = SparseMat::zeros(level, d, d);
    for x in 0..n {
        for y in 0..n {
            // S(delta_x (x) y) = delta_{y^{-1} x^{-1} y} (x) y^{-1}
            let yi = gt.inverse[y];
            let target = gt.mult[gt.mult[yi][gt.inverse[x]]][y];
            antipode.add_entry(idx(target, yi), idx(x, y), &one);
        }
    }
    // S has order two on D(G)
    let antipode_inv = antipode.clone();
    let hopf = HopfData {
        level,
        dim: d,
        mult,
        unit,
        coprod,
        counit,
        antipode,
        antipode_inv,
    };
    let axioms = hopf.verify_hopf_axioms();
    if !axioms.all_pass() {
        return Err(Error::Verification {
            check: "drinfeld_double.hopf_axioms".into(),
            witness: axioms.failure_summary(),
        });
    }
    // R = sum_{g,h} (delta_g (x) e) (x) (delta_h (x) g)
    let mut r = Tensor2::zero(level, d);
    for g in 0..n {
        for h in 0..n {
            r.add_entry(idx(g, gt.identity), idx(h, g), &one);
        }
    }
    // candidate ribbon element v = u = sum_g delta_g (x) g^{-1}
    let mut v = Element::zero(level, d);
    for g in 0..n {
        v.coeffs[idx(g, gt.inverse[g])] = one.clone();
    }
    let rh = RibbonHopf::build(hopf, r, None, v)?;
    let qt = rh.verify_quasitriangular();
    if !qt.all_pass() {
        return Err(Error::Verification {
            check: "drinfeld_double.quasitriangular".into(),
            witness: qt.failure_summary(),
        });
    }
    let ribbon = rh.verify_ribbon();
    if !ribbon.all_pass() {
        return Err(Error::Verification {
            check: "drinfeld_double.ribbon".into(),
            witness: ribbon.failure_summary(),
        });
    }
    Ok(rh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_table_validation() {
        assert!(FiniteGroupTable::new(vec![vec![0, 1], vec![1, 0]]).is_ok());
        // not associative / no identity
        assert!(FiniteGroupTable::new(vec![vec![1, 1], vec![1, 1]]).is_err());
        let s3 = FiniteGroupTable::symmetric3();
        assert_eq!(s3.order, 6);
        assert_eq!(s3.identity, 0);
        // S3 is nonabelian
        assert!((0..6).any(|a| (0..6).any(|b| s3.mult[a][b] != s3.mult[b][a])));
    }

    #[test]
    fn trivial_group_double_is_one_dimensional() {
        let r = drinfeld_double(&FiniteGroupTable::cyclic(1), 1).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.verify_ribbon().all_pass());
        assert_eq!(r.v, r.hopf.unit);
    }

    #[test]
    fn doubles_pass_the_full_battery() {
        for n in [2usize, 3, 4] {
            let r = drinfeld_double(&FiniteGroupTable::cyclic(n), 1).unwrap();
            assert_eq!(r.dim(), n * n);
            assert!(r.verify_quasitriangular().all_pass(), "n={n}");
            assert!(r.verify_ribbon().all_pass(), "n={n}");
            assert!(r.verify_integrals().all_pass(), "n={n}");
            let (fact, rank) = r.factorizability_check();
            assert!(fact, "n={n}");
            assert_eq!(rank, n * n);
        }
    }
}
