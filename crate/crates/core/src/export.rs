//! JSON sparse-matrix interchange and the human-readable rate listing.
//!
//! Entries are `[row, col, value]` with exact rational strings; polynomial
//! matrices carry coefficient lists `["c0", "c1", ...]` instead.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{Configuration, SectorBasis};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::processes::TransitionRecord;
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::sparse::SparseMatrix;

/// What the matrix is and where it was evaluated.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExportMeta {
    pub object: String,
    pub n: usize,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none", default)]
    pub l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    pub t: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixExport<E> {
    #[serde(flatten)]
    pub meta: ExportMeta,
    pub rows: usize,
    pub cols: usize,
    /// Index map: the basis element behind each row/column index.
    pub labels: Vec<String>,
    pub entries: Vec<(usize, usize, E)>,
}

pub type RationalExport = MatrixExport<String>;
pub type PolyExport = MatrixExport<Vec<String>>;

pub fn basis_labels(basis: &SectorBasis) -> Vec<String> {
    basis.states().iter().map(|s| s.encode(basis.n)).collect()
}

pub fn export_matrix(meta: ExportMeta, m: &SparseMatrix<Rational>, labels: Vec<String>) -> RationalExport {
    MatrixExport {
        meta,
        rows: m.nrows(),
        cols: m.ncols(),
        labels,
        entries: m.entries().map(|(r, c, v)| (r, c, format_rational(v))).collect(),
    }
}

pub fn export_poly_matrix(meta: ExportMeta, m: &SparseMatrix<Poly<Rational>>, labels: Vec<String>) -> PolyExport {
    MatrixExport {
        meta,
        rows: m.nrows(),
        cols: m.ncols(),
        labels,
        entries: m
            .entries()
            .map(|(r, c, p)| (r, c, p.coeffs().iter().map(format_rational).collect()))
            .collect(),
    }
}

fn check_bounds<E>(e: &MatrixExport<E>) -> Result<()> {
    if let Some(&(r, c, _)) = e.entries.iter().find(|(r, c, _)| *r >= e.rows || *c >= e.cols) {
        return Err(Error::Malformed(format!("entry ({r}, {c}) outside a {}x{} matrix", e.rows, e.cols)));
    }
    Ok(())
}

pub fn import_matrix(e: &RationalExport) -> Result<SparseMatrix<Rational>> {
    check_bounds(e)?;
    let entries = e
        .entries
        .iter()
        .map(|(r, c, v)| Ok((*r, *c, parse_rational(v)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_triplets(e.rows, e.cols, entries))
}

pub fn import_poly_matrix(e: &PolyExport) -> Result<SparseMatrix<Poly<Rational>>> {
    check_bounds(e)?;
    let entries = e
        .entries
        .iter()
        .map(|(r, c, cs)| {
            let coeffs = cs.iter().map(|v| parse_rational(v)).collect::<Result<Vec<_>>>()?;
            Ok((*r, *c, Poly::new(coeffs)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SparseMatrix::from_triplets(e.rows, e.cols, entries))
}

/// One line `σ → σ′ : rate` per ordered pair, rates summed over the
/// activated site, sorted by source then target.
pub fn rate_listing(n: usize, records: &[TransitionRecord<Rational>]) -> String {
    let mut summed: BTreeMap<(&Configuration, &Configuration), Rational> = BTreeMap::new();
    for rec in records {
        let e = summed.entry((&rec.source, &rec.target)).or_insert_with(|| Rational::from_integer(0.into()));
        *e = e.clone() + rec.rate.clone();
    }
    let mut out = String::new();
    for ((s, t), rate) in summed {
        writeln!(out, "{} → {} : {}", s.encode(n), t.encode(n), format_rational(&rate)).unwrap();
    }
    out
}

/// The same listing read off a generator's off-diagonal entries.
pub fn matrix_listing(basis: &SectorBasis, m: &SparseMatrix<Rational>) -> String {
    let mut lines: Vec<(usize, usize, String)> = m
        .entries()
        .filter(|(r, c, _)| r != c)
        .map(|(r, c, v)| (c, r, format_rational(v)))
        .collect();
    lines.sort();
    let mut out = String::new();
    for (c, r, v) in lines {
        writeln!(out, "{} → {} : {v}", basis.state(c).encode(basis.n), basis.state(r).encode(basis.n)).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{sector_basis, SectorSpec};
    use crate::processes::{pushtasep_markov, transition_listing, ModelParams};
    use crate::scalar::rat;
    use crate::transfer::{transfer_poly, TransferSpec};

    fn setup() -> (ModelParams<Rational>, SectorSpec) {
        let p = ModelParams::new(2, 4, rat(1, 2), vec![rat(1, 1); 4]).unwrap();
        (p, SectorSpec::new(2, 4, vec![1, 2, 1]).unwrap())
    }

    #[test]
    fn rational_round_trip_through_json() {
        let (p, spec) = setup();
        let m = pushtasep_markov(&p, &spec).unwrap();
        let basis = sector_basis(&spec).unwrap();
        let meta = ExportMeta { object: "markov-push".into(), n: 2, l: Some(4), m: Some(vec![1, 2, 1]), t: "1/2".into(), ..Default::default() };
        let e = export_matrix(meta, &m, basis_labels(&basis));
        let json = serde_json::to_string(&e).unwrap();
        let back: RationalExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, e);
        assert_eq!(import_matrix(&back).unwrap(), m);
        assert_eq!(back.labels[0], "0112");
    }

    #[test]
    fn poly_round_trip_through_json() {
        let (p, spec) = setup();
        let m = transfer_poly(&TransferSpec::antisymmetric(1, &p, &spec).unwrap()).unwrap();
        let e = export_poly_matrix(ExportMeta::default(), &m, vec![]);
        let json = serde_json::to_string(&e).unwrap();
        let back: PolyExport = serde_json::from_str(&json).unwrap();
        assert_eq!(import_poly_matrix(&back).unwrap(), m);
    }

    #[test]
    fn listing_is_sorted_and_summed() {
        let (p, spec) = setup();
        let listing = rate_listing(2, &transition_listing(&p, &spec).unwrap());
        let lines: Vec<&str> = listing.lines().collect();
        let mut sorted = lines.clone();
        sorted.sort();
        assert_eq!(lines, sorted);
        assert!(lines.contains(&"0121 → 1021 : 1"));
        assert!(lines.contains(&"0121 → 1102 : 4/7"));
        let basis = sector_basis(&spec).unwrap();
        assert_eq!(matrix_listing(&basis, &pushtasep_markov(&p, &spec).unwrap()), listing);
    }

    #[test]
    fn out_of_range_entries_are_rejected() {
        let e = RationalExport { meta: ExportMeta::default(), rows: 1, cols: 1, labels: vec![], entries: vec![(1, 0, "1".into())] };
        assert!(import_matrix(&e).is_err());
    }
}
