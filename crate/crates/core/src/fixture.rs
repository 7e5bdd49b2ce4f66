//! JSON fixture schema: serialization of ribbon Hopf data as exact scalar
//! strings, loading with full verification, and content hashing.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::groups::{drinfeld_double, group_algebra, FiniteGroupTable};
use crate::hopf::{Element, HopfData, Tensor2};
use crate::linalg::SparseMat;
use crate::ribbon::RibbonHopf;
use crate::scalar::{parse_scalar, Scalar};

/// A fixture document. All scalars are exact strings ("p/q" polynomials in z);
/// no floats appear anywhere in the format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureDoc {
    pub name: String,
    pub dim: usize,
    pub cyclotomic_level: u32,
    #[serde(default)]
    pub basis_labels: Vec<String>,
    /// Sparse triples [i, j, k, scalar]: b_i b_j = sum scalar * b_k.
    pub mult: Vec<(usize, usize, usize, String)>,
    /// Sparse pairs [k, scalar].
    pub unit: Vec<(usize, String)>,
    /// Sparse triples [i, j, k, scalar]: Delta(b_i) = sum scalar * b_j x b_k.
    pub coprod: Vec<(usize, usize, usize, String)>,
    pub counit: Vec<(usize, String)>,
    /// Sparse pairs [r, c, scalar]: column c holds S(b_c).
    pub antipode: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipode_inv: Option<Vec<(usize, usize, String)>>,
    /// Sparse pairs [i, j, scalar] for R = sum scalar * b_i x b_j.
    pub r: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_inv: Option<Vec<(usize, usize, String)>>,
    pub ribbon: Vec<(usize, String)>,
}

impl FixtureDoc {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes")
    }

    /// Content digest used for provenance headers in every CLI output.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_json().as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn fmt_scalar(s: &Scalar) -> String {
    s.to_string()
}

fn element_entries(e: &Element) -> Vec<(usize, String)> {
    e.support().map(|(k, v)| (k, fmt_scalar(v))).collect()
}

fn tensor2_entries(t: &Tensor2) -> Vec<(usize, usize, String)> {
    t.entries.iter().map(|((i, j), v)| (*i, *j, fmt_scalar(v))).collect()
}

fn mat_entries(m: &SparseMat) -> Vec<(usize, usize, String)> {
    let mut out = Vec::new();
    for (r, row) in m.rows().iter().enumerate() {
        for (c, v) in row {
            out.push((r, *c, fmt_scalar(v)));
        }
    }
    out
}

/// Serializes a ribbon Hopf algebra into the fixture format.
pub fn serialize(r: &RibbonHopf, name: &str) -> FixtureDoc {
    let h = &r.hopf;
    let mut mult = Vec::new();
    for i in 0..h.dim {
        for j in 0..h.dim {
            for (k, v) in h.multiply_basis(i, j) {
                mult.push((i, j, *k, fmt_scalar(v)));
            }
        }
    }
    let mut coprod = Vec::new();
    for (i, t) in h.coprod.iter().enumerate() {
        for ((a, b), v) in &t.entries {
            coprod.push((i, *a, *b, fmt_scalar(v)));
        }
    }
    FixtureDoc {
        name: name.to_string(),
        dim: h.dim,
        cyclotomic_level: h.level,
        basis_labels: Vec::new(),
        mult,
        unit: element_entries(&h.unit),
        coprod,
        counit: h
            .counit
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k, fmt_scalar(v)))
            .collect(),
        antipode: mat_entries(&h.antipode),
        antipode_inv: Some(mat_entries(&h.antipode_inv)),
        r: tensor2_entries(&r.r_mat),
        r_inv: Some(tensor2_entries(&r.r_inv)),
        ribbon: element_entries(&r.v),
    }
}

/// Parses and fully verifies a fixture; any named verifier failure aborts.
pub fn load(doc: &FixtureDoc) -> Result<RibbonHopf> {
    let d = doc.dim;
    let level = doc.cyclotomic_level;
    if d == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    let ps = |s: &str| parse_scalar(level, s);
    let mut mult = vec![vec![Vec::new(); d]; d];
    for (i, j, k, s) in &doc.mult {
        if *i >= d || *j >= d || *k >= d {
            return Err(Error::Parse("mult index out of range".into()));
        }
        mult[*i][*j].push((*k, ps(s)?));
    }
    for row in &mut mult {
        for cell in row.iter_mut() {
            cell.sort_by_key(|(k, _)| *k);
        }
    }
    let mut unit = Element::zero(level, d);
    for (k, s) in &doc.unit {
        unit.coeffs[*k] = ps(s)?;
    }
    let mut coprod = vec![Tensor2::zero(level, d); d];
    for (i, a, b, s) in &doc.coprod {
        coprod[*i].add_entry(*a, *b, &ps(s)?);
    }
    let mut counit = vec![Scalar::zero(level); d];
    for (k, s) in &doc.counit {
        counit[*k] = ps(s)?;
    }
    let mut antipode = SparseMat::zeros(level, d, d);
    for (r, c, s) in &doc.antipode {
        antipode.add_entry(*r, *c, &ps(s)?);
    }
    let antipode_inv = match &doc.antipode_inv {
        Some(entries) => {
            let mut m = SparseMat::zeros(level, d, d);
            for (r, c, s) in entries {
                m.add_entry(*r, *c, &ps(s)?);
            }
            m
        }
        None => antipode.inverse().map_err(|_| Error::Structural(
            "antipode matrix is not invertible".into(),
        ))?,
    };
    let hopf = HopfData { level, dim: d, mult, unit, coprod, counit, antipode, antipode_inv };
    let axioms = hopf.verify_hopf_axioms();
    if !axioms.all_pass() {
        return Err(Error::Verification {
            check: "fixture.hopf_axioms".into(),
            witness: axioms.failure_summary(),
        });
    }
    let mut r_mat = Tensor2::zero(level, d);
    for (i, j, s) in &doc.r {
        r_mat.add_entry(*i, *j, &ps(s)?);
    }
    let r_inv = match &doc.r_inv {
        Some(entries) => {
            let mut t = Tensor2::zero(level, d);
            for (i, j, s) in entries {
                t.add_entry(*i, *j, &ps(s)?);
            }
            Some(t)
        }
        None => None,
    };
    let mut v = Element::zero(level, d);
    for (k, s) in &doc.ribbon {
        v.coeffs[*k] = ps(s)?;
    }
    let rh = RibbonHopf::build(hopf, r_mat, r_inv, v)?;
    let qt = rh.verify_quasitriangular();
    if !qt.all_pass() {
        return Err(Error::Verification {
            check: "fixture.quasitriangular".into(),
            witness: qt.failure_summary(),
        });
    }
    let ribbon = rh.verify_ribbon();
    if !ribbon.all_pass() {
        return Err(Error::Verification {
            check: "fixture.ribbon".into(),
            witness: ribbon.failure_summary(),
        });
    }
    Ok(rh)
}

pub fn load_from_str(text: &str) -> Result<(FixtureDoc, RibbonHopf)> {
    let doc: FixtureDoc = serde_json::from_str(text)?;
    let rh = load(&doc)?;
    Ok((doc, rh))
}

pub fn load_from_path(path: &std::path::Path) -> Result<(FixtureDoc, RibbonHopf)> {
    let text = std::fs::read_to_string(path)?;
    load_from_str(&text)
}

/// Built-in example fixtures by name.
pub fn builtin(name: &str) -> Result<RibbonHopf> {
    match name {
        "trivial" => drinfeld_double(&FiniteGroupTable::cyclic(1), 1),
        "dz2" => drinfeld_double(&FiniteGroupTable::cyclic(2), 1),
        "dz3" => drinfeld_double(&FiniteGroupTable::cyclic(3), 1),
        "dz4" => drinfeld_double(&FiniteGroupTable::cyclic(4), 1),
        "ds3" => drinfeld_double(&FiniteGroupTable::symmetric3(), 1),
        "gz2" => group_algebra(&FiniteGroupTable::cyclic(2), 1),
        "gz3" => group_algebra(&FiniteGroupTable::cyclic(3), 1),
        other => Err(Error::Parse(format!(
            "unknown example '{other}' (expected trivial|dz2|dz3|dz4|ds3|gz2|gz3)"
        ))),
    }
}

pub const BUILTIN_NAMES: &[&str] = &["trivial", "dz2", "dz3", "dz4", "ds3", "gz2", "gz3"];
