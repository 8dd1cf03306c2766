//! Exact character tables by the Dixon–Schneider method.
//!
//! Values live in `Z[x]/Φ_e(x)` where `e` is the exponent of the group and
//! `x` corresponds to a fixed primitive `e`-th root of unity modulo the
//! auxiliary prime. No floating point is used anywhere.

pub mod cyclotomic;
mod dixon;
pub mod modular;

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use cyclotomic::{Cyc, CyclotomicRing};
pub use dixon::dixon_schneider;

use crate::error::{Error, Result};
use crate::matgrp::{GroupAutomorphism, MatGroup};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    order: u64,
    class_sizes: Vec<u64>,
    class_orders: Vec<u64>,
    inverse_class: Vec<usize>,
    ring: CyclotomicRing,
    /// `values[row][class]`.
    values: Vec<Vec<Cyc>>,
    degrees: Vec<u64>,
    prime: u64,
    root: u64,
}

/// Versioned JSON form of a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "type")]
    pub type_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub order: u64,
    pub exponent: u64,
    pub prime: u64,
    pub root: u64,
    pub class_sizes: Vec<u64>,
    pub class_orders: Vec<u64>,
    pub inverse_class: Vec<usize>,
    pub degrees: Vec<u64>,
    /// `values[row][class]`: coefficients in the power basis, trailing
    /// zeros dropped.
    pub values: Vec<Vec<Vec<i64>>>,
}

impl CharacterTable {
    pub(crate) fn from_parts(
        order: u64,
        class_sizes: Vec<u64>,
        class_orders: Vec<u64>,
        inverse_class: Vec<usize>,
        ring: CyclotomicRing,
        values: Vec<Vec<Cyc>>,
        prime: u64,
        root: u64,
    ) -> Result<Self> {
        let degrees = values
            .iter()
            .map(|row| {
                ring.as_integer(&row[0])
                    .filter(|&d| d > 0)
                    .map(|d| d as u64)
                    .ok_or_else(|| Error::Internal("degree is not a positive integer".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut t = Self {
            order,
            class_sizes,
            class_orders,
            inverse_class,
            ring,
            values,
            degrees,
            prime,
            root,
        };
        t.sort_rows();
        Ok(t)
    }

    fn sort_rows(&mut self) {
        let mut idx: Vec<usize> = (0..self.values.len()).collect();
        idx.sort_by(|&a, &b| {
            self.degrees[a]
                .cmp(&self.degrees[b])
                .then_with(|| self.values[a].cmp(&self.values[b]))
        });
        self.values = idx.iter().map(|&i| self.values[i].clone()).collect();
        self.degrees = idx.iter().map(|&i| self.degrees[i]).collect();
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn exponent(&self) -> u64 {
        self.ring.exponent()
    }

    pub fn ring(&self) -> &CyclotomicRing {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    pub fn class_orders(&self) -> &[u64] {
        &self.class_orders
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn value(&self, row: usize, class: usize) -> &Cyc {
        &self.values[row][class]
    }

    pub fn row(&self, row: usize) -> &[Cyc] {
        &self.values[row]
    }

    /// Auxiliary prime and root used during construction.
    pub fn modular_data(&self) -> (u64, u64) {
        (self.prime, self.root)
    }

    /// `Σ_C |C| χ_a(C) conj χ_b(C)` as an element of the ring.
    pub fn inner_product_raw(&self, a: usize, b: usize) -> Cyc {
        let mut acc = vec![0i64; self.ring.exponent() as usize];
        for (c, &h) in self.class_sizes.iter().enumerate() {
            self.ring
                .add_product_conj(&mut acc, h as i64, &self.values[a][c], &self.values[b][c]);
        }
        self.ring.reduce(&acc)
    }

    /// Both orthogonality relations, exactly.
    pub fn check_orthogonality(&self) -> Result<()> {
        let k = self.len();
        if k != self.class_sizes.len() {
            return Err(Error::Internal(format!(
                "{k} characters for {} classes",
                self.class_sizes.len()
            )));
        }
        for a in 0..k {
            for b in a..k {
                let expect = if a == b { self.order as i64 } else { 0 };
                if self.inner_product_raw(a, b) != self.ring.integer(expect) {
                    return Err(Error::Internal(format!("rows {a} and {b} are not orthogonal")));
                }
            }
        }
        let e = self.ring.exponent() as usize;
        for c in 0..k {
            for d in c..k {
                let mut acc = vec![0i64; e];
                for row in &self.values {
                    self.ring.add_product_conj(&mut acc, 1, &row[c], &row[d]);
                }
                let expect = if c == d {
                    (self.order / self.class_sizes[c]) as i64
                } else {
                    0
                };
                if self.ring.reduce(&acc) != self.ring.integer(expect) {
                    return Err(Error::Internal(format!("columns {c} and {d} are not orthogonal")));
                }
            }
        }
        let sum_sq: u128 = self.degrees.iter().map(|&d| (d as u128) * (d as u128)).sum();
        if sum_sq != self.order as u128 || self.degrees.iter().any(|&d| !self.order.is_multiple_of(d)) {
            return Err(Error::Internal("degrees do not match the group order".into()));
        }
        Ok(())
    }

    /// Rows whose degree is prime to `p`.
    pub fn p_prime_rows(&self, p: u64) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.degrees[i].is_multiple_of(p)).collect()
    }

    /// `ν` with `χ(z) = χ(1)·exp(2πi ν/g)` for a central class `z` of order
    /// `g`.
    pub fn central_character(&self, row: usize, z_class: usize) -> Result<u64> {
        let g = self.class_orders[z_class];
        let e = self.ring.exponent();
        if self.class_sizes[z_class] != 1 || !e.is_multiple_of(g) {
            return Err(Error::InvalidInput(format!("class {z_class} is not central")));
        }
        let step = e / g;
        let degree = self.degrees[row] as i64;
        for nu in 0..g {
            let expect = self.ring.scale(&self.ring.root_power((nu * step) as i64), degree);
            if self.values[row][z_class] == expect {
                return Ok(nu);
            }
        }
        Err(Error::Internal(format!(
            "row {row} is not a multiple of a root of unity on class {z_class}"
        )))
    }

    /// Row permutation `π` with `χ_{π(i)}(C) = χ_i(σ⁻¹(C))`, given the class
    /// permutation `C ↦ σ(C)`.
    pub fn permutation_from_classes(&self, class_perm: &[usize]) -> Result<Vec<usize>> {
        let k = self.class_sizes.len();
        let mut inv = vec![usize::MAX; k];
        for (c, &d) in class_perm.iter().enumerate() {
            if d >= k || inv[d] != usize::MAX {
                return Err(Error::InvalidAutomorphism("not a permutation of classes".into()));
            }
            inv[d] = c;
        }
        let lookup: HashMap<&[Cyc], usize> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, r)| (r.as_slice(), i))
            .collect();
        self.values
            .iter()
            .map(|row| {
                let moved: Vec<Cyc> = (0..k).map(|c| row[inv[c]].clone()).collect();
                lookup.get(moved.as_slice()).copied().ok_or_else(|| {
                    Error::InvalidAutomorphism("permuted row is not a character".into())
                })
            })
            .collect()
    }

    pub fn automorphism_action(&self, g: &MatGroup, sigma: &GroupAutomorphism) -> Result<Vec<usize>> {
        self.permutation_from_classes(&g.class_permutation(sigma)?)
    }

    pub fn document(&self) -> TableDocument {
        let trim = |c: &Cyc| {
            let mut v = c.clone();
            while v.len() > 1 && v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        TableDocument {
            schema_version: crate::SCHEMA_VERSION,
            type_label: None,
            p: None,
            n: None,
            order: self.order,
            exponent: self.ring.exponent(),
            prime: self.prime,
            root: self.root,
            class_sizes: self.class_sizes.clone(),
            class_orders: self.class_orders.clone(),
            inverse_class: self.inverse_class.clone(),
            degrees: self.degrees.clone(),
            values: self.values.iter().map(|r| r.iter().map(trim).collect()).collect(),
        }
    }

    /// Rebuilds a table from its document and re-checks orthogonality.
    pub fn from_document(doc: &TableDocument) -> Result<Self> {
        if doc.schema_version != crate::SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version {}", doc.schema_version)));
        }
        let ring = CyclotomicRing::new(doc.exponent);
        let phi = ring.degree();
        let values = doc
            .values
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| {
                        if c.len() > phi {
                            return Err(Error::Parse("value has too many coefficients".into()));
                        }
                        let mut v = c.clone();
                        v.resize(phi, 0);
                        Ok(v)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let k = doc.class_sizes.len();
        if doc.class_orders.len() != k || doc.inverse_class.len() != k || values.iter().any(|r| r.len() != k) {
            return Err(Error::Parse("inconsistent class counts".into()));
        }
        let t = Self::from_parts(
            doc.order,
            doc.class_sizes.clone(),
            doc.class_orders.clone(),
            doc.inverse_class.clone(),
            ring,
            values,
            doc.prime,
            doc.root,
        )?;
        if t.degrees != doc.degrees {
            return Err(Error::Parse("degrees do not match the first column".into()));
        }
        t.check_orthogonality()?;
        Ok(t)
    }

    /// Tab-separated export: one line per character, values as coefficient
    /// tuples.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# schema_version\t{}", crate::SCHEMA_VERSION);
        let _ = writeln!(s, "# order\t{}\texponent\t{}", self.order, self.exponent());
        let join = |v: &[u64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\t");
        let _ = writeln!(s, "# class_sizes\t{}", join(&self.class_sizes));
        let _ = writeln!(s, "# class_orders\t{}", join(&self.class_orders));
        let doc = self.document();
        for (d, row) in self.degrees.iter().zip(&doc.values) {
            let cells: Vec<String> = row
                .iter()
                .map(|c| format!("({})", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            let _ = writeln!(s, "{d}\t{}", cells.join("\t"));
        }
        s
    }

    /// Parses [`Self::to_tsv`] output. Inverse classes are recovered from
    /// the values.
    pub fn from_tsv(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let mut order = None;
        let mut exponent = None;
        let mut sizes = None;
        let mut orders = None;
        let mut rows: Vec<Vec<Vec<i64>>> = Vec::new();
        let mut degrees = Vec::new();
        let nums = |fields: &[&str]| -> Result<Vec<u64>> {
            fields.iter().map(|f| f.parse().map_err(|_| bad("bad integer"))).collect()
        };
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let fields: Vec<&str> = line.split('\t').collect();
            match fields[0] {
                "# schema_version" => {
                    if fields.get(1) != Some(&"1") {
                        return Err(bad("unsupported schema version"));
                    }
                }
                "# order" => {
                    order = Some(nums(&fields[1..2])?[0]);
                    exponent = Some(nums(&fields[3..4])?[0]);
                }
                "# class_sizes" => sizes = Some(nums(&fields[1..])?),
                "# class_orders" => orders = Some(nums(&fields[1..])?),
                _ => {
                    degrees.push(fields[0].parse().map_err(|_| bad("bad degree"))?);
                    let row = fields[1..]
                        .iter()
                        .map(|cell| {
                            let inner = cell
                                .strip_prefix('(')
                                .and_then(|c| c.strip_suffix(')'))
                                .ok_or_else(|| bad("bad cell"))?;
                            inner
                                .split(',')
                                .map(|x| x.parse().map_err(|_| bad("bad coefficient")))
                                .collect()
                        })
                        .collect::<Result<Vec<Vec<i64>>>>()?;
                    rows.push(row);
                }
            }
        }
        let (Some(order), Some(exponent), Some(sizes), Some(orders)) = (order, exponent, sizes, orders) else {
            return Err(bad("missing header"));
        };
        let ring = CyclotomicRing::new(exponent);
        // the inverse class of C is the class whose column is the conjugate
        let k = sizes.len();
        let padded: Vec<Vec<Cyc>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|c| {
                        let mut v = c.clone();
                        v.resize(ring.degree(), 0);
                        v
                    })
                    .collect()
            })
            .collect();
        let column = |c: usize| padded.iter().map(|r| r[c].clone()).collect::<Vec<_>>();
        let mut inverse = Vec::with_capacity(k);
        for c in 0..k {
            let conj: Vec<Cyc> = column(c).iter().map(|v| ring.conj(v)).collect();
            let d = (0..k)
                .find(|&d| column(d) == conj)
                .ok_or_else(|| bad("no inverse class"))?;
            inverse.push(d);
        }
        let doc = TableDocument {
            schema_version: crate::SCHEMA_VERSION,
            type_label: None,
            p: None,
            n: None,
            order,
            exponent,
            prime: 0,
            root: 0,
            class_sizes: sizes,
            class_orders: orders,
            inverse_class: inverse,
            degrees,
            values: rows,
        };
        Self::from_document(&doc)
    }
}
