use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::field::FqContext;
use crate::error::{Error, Result};
use crate::rootdata::{group_order, Family, RootDatum};
use crate::twist::stabilizer_torus;

/// Default ceiling on `|G^F|` for enumeration.
pub const DEFAULT_MAX_GROUP_ORDER: u64 = 100_000_000;

/// Largest supported matrix degree.
pub const MAX_DEGREE: usize = 4;

/// Row-major square matrix of encoded field elements; entries beyond the
/// group degree are zero.
pub type Mat = [u16; MAX_DEGREE * MAX_DEGREE];

#[derive(Clone, Debug)]
pub struct ClassData {
    /// Least element of each class.
    pub representatives: Vec<Mat>,
    pub sizes: Vec<u64>,
    pub orders: Vec<u64>,
    /// Class of the inverse of each class.
    pub inverse: Vec<usize>,
    /// Element index to class.
    pub class_of: Vec<u32>,
}

impl ClassData {
    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }
}

pub struct MatGroup {
    datum: RootDatum,
    field: FqContext,
    degree: usize,
    generators: Vec<Mat>,
    order: u64,
    elements: OnceLock<Elements>,
    classes: OnceLock<ClassData>,
}

struct Elements {
    list: Vec<Mat>,
    index: HashMap<Mat, u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupAutomorphism {
    /// `g ↦ m g m⁻¹`.
    Conjugation { matrix: Mat, inverse: Mat },
    /// Entrywise `x ↦ x^{p^j}`.
    FieldPower(u32),
    /// Apply the parts in order, first one first.
    Composite(Vec<GroupAutomorphism>),
}

impl MatGroup {
    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn field(&self) -> &FqContext {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Mat] {
        &self.generators
    }

    /// Order predicted by the order formula; enumeration must agree.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn identity(&self) -> Mat {
        let mut m = [0; 16];
        for i in 0..self.degree {
            m[i * MAX_DEGREE + i] = 1;
        }
        m
    }

    pub fn mul(&self, a: &Mat, b: &Mat) -> Mat {
        let f = &self.field;
        let n = self.degree;
        let mut out = [0u16; 16];
        for i in 0..n {
            for k in 0..n {
                let aik = a[i * MAX_DEGREE + k] as u32;
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let b_kj = b[k * MAX_DEGREE + j] as u32;
                    if b_kj != 0 {
                        let cell = &mut out[i * MAX_DEGREE + j];
                        *cell = f.add(*cell as u32, f.mul(aik, b_kj)) as u16;
                    }
                }
            }
        }
        out
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self, a: &Mat) -> Option<Mat> {
        let f = &self.field;
        let n = self.degree;
        let mut m = *a;
        let mut inv = self.identity();
        for col in 0..n {
            let pivot = (col..n).find(|&r| m[r * MAX_DEGREE + col] != 0)?;
            for j in 0..n {
                m.swap(col * MAX_DEGREE + j, pivot * MAX_DEGREE + j);
                inv.swap(col * MAX_DEGREE + j, pivot * MAX_DEGREE + j);
            }
            let s = f.inv(m[col * MAX_DEGREE + col] as u32)?;
            for j in 0..n {
                m[col * MAX_DEGREE + j] = f.mul(m[col * MAX_DEGREE + j] as u32, s) as u16;
                inv[col * MAX_DEGREE + j] = f.mul(inv[col * MAX_DEGREE + j] as u32, s) as u16;
            }
            for r in 0..n {
                let factor = m[r * MAX_DEGREE + col] as u32;
                if r == col || factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let sub = |x: u16, y: u16| f.sub(x as u32, f.mul(factor, y as u32)) as u16;
                    m[r * MAX_DEGREE + j] = sub(m[r * MAX_DEGREE + j], m[col * MAX_DEGREE + j]);
                    inv[r * MAX_DEGREE + j] = sub(inv[r * MAX_DEGREE + j], inv[col * MAX_DEGREE + j]);
                }
            }
        }
        Some(inv)
    }

    pub fn frobenius_power(&self, a: &Mat, j: u32) -> Mat {
        let mut out = *a;
        for x in out.iter_mut() {
            *x = self.field.frobenius(*x as u32, j) as u16;
        }
        out
    }

    pub fn rows(&self, a: &Mat) -> Vec<Vec<u32>> {
        (0..self.degree)
            .map(|i| (0..self.degree).map(|j| a[i * MAX_DEGREE + j] as u32).collect())
            .collect()
    }

    fn elements(&self) -> &Elements {
        self.elements.get_or_init(|| {
            let id = self.identity();
            let mut list = vec![id];
            let mut index = HashMap::with_capacity(self.order as usize);
            index.insert(id, 0u32);
            let mut queue = VecDeque::from([id]);
            while let Some(g) = queue.pop_front() {
                for s in &self.generators {
                    let h = self.mul(&g, s);
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(h) {
                        e.insert(list.len() as u32);
                        list.push(h);
                        queue.push_back(h);
                    }
                }
            }
            Elements { list, index }
        })
    }

    /// All elements in breadth-first order from the identity.
    pub fn element_list(&self) -> &[Mat] {
        &self.elements().list
    }

    pub fn index_of(&self, m: &Mat) -> Option<usize> {
        self.elements().index.get(m).map(|&i| i as usize)
    }

    pub fn contains(&self, m: &Mat) -> bool {
        self.index_of(m).is_some()
    }

    pub fn element_order(&self, m: &Mat) -> u64 {
        let id = self.identity();
        let mut cur = *m;
        let mut k = 1;
        while cur != id {
            cur = self.mul(&cur, m);
            k += 1;
        }
        k
    }

    pub fn power(&self, m: &Mat, e: u64) -> Mat {
        let mut acc = self.identity();
        let mut base = *m;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Conjugacy classes by closure under conjugation by the generators.
    pub fn classes(&self) -> &ClassData {
        self.classes.get_or_init(|| self.compute_classes())
    }

    fn compute_classes(&self) -> ClassData {
        let elements = self.elements();
        let total = elements.list.len();
        let gens: Vec<(Mat, Mat)> = self
            .generators
            .iter()
            .map(|g| (*g, self.inverse(g).expect("generators are invertible")))
            .collect();
        let mut raw: Vec<u32> = vec![u32::MAX; total];
        let mut members: Vec<Vec<u32>> = Vec::new();
        for start in 0..total {
            if raw[start] != u32::MAX {
                continue;
            }
            let id = members.len() as u32;
            raw[start] = id;
            let mut class = vec![start as u32];
            let mut head = 0;
            while head < class.len() {
                let x = elements.list[class[head] as usize];
                head += 1;
                for (g, gi) in &gens {
                    let y = self.mul(&self.mul(g, &x), gi);
                    let yi = elements.index[&y];
                    if raw[yi as usize] == u32::MAX {
                        raw[yi as usize] = id;
                        class.push(yi);
                    }
                }
            }
            members.push(class);
        }
        let mut info: Vec<(u64, u64, Mat, usize)> = members
            .iter()
            .enumerate()
            .map(|(c, m)| {
                let rep = m
                    .iter()
                    .map(|&i| elements.list[i as usize])
                    .min()
                    .expect("nonempty class");
                (self.element_order(&rep), m.len() as u64, rep, c)
            })
            .collect();
        info.sort();
        let mut relabel = vec![0u32; info.len()];
        for (new, entry) in info.iter().enumerate() {
            relabel[entry.3] = new as u32;
        }
        let class_of: Vec<u32> = raw.iter().map(|&c| relabel[c as usize]).collect();
        let representatives: Vec<Mat> = info.iter().map(|e| e.2).collect();
        let inverse = representatives
            .iter()
            .map(|r| {
                let inv = self.inverse(r).expect("invertible");
                class_of[elements.index[&inv] as usize] as usize
            })
            .collect();
        ClassData {
            sizes: info.iter().map(|e| e.1).collect(),
            orders: info.iter().map(|e| e.0).collect(),
            representatives,
            inverse,
            class_of,
        }
    }

    pub fn class_of(&self, m: &Mat) -> Option<usize> {
        self.index_of(m).map(|i| self.classes().class_of[i] as usize)
    }

    /// Class of `g^e` for `g` in class `c`.
    pub fn power_class(&self, c: usize, e: u64) -> usize {
        let rep = self.classes().representatives[c];
        self.class_of(&self.power(&rep, e)).expect("powers stay in the group")
    }

    /// Elements commuting with every generator.
    pub fn center_of(&self) -> Vec<Mat> {
        self.element_list()
            .iter()
            .filter(|z| {
                self.generators
                    .iter()
                    .all(|g| self.mul(z, g) == self.mul(g, z))
            })
            .copied()
            .collect()
    }

    /// `α_k^∨(t)` as a diagonal matrix, `t` given by its discrete log.
    pub fn coroot(&self, k: usize, log_t: i64) -> Mat {
        let f = &self.field;
        let t = f.zeta_pow(log_t) as u16;
        let ti = f.zeta_pow(-log_t) as u16;
        let mut m = self.identity();
        let mut set = |i: usize, v: u16| m[i * MAX_DEGREE + i] = v;
        match self.datum.label().family {
            Family::A => {
                set(k, t);
                set(k + 1, ti);
            }
            _ => {
                let half = self.degree / 2;
                let mirror = |i: usize| self.degree - 1 - i;
                if k + 1 < half {
                    set(k, t);
                    set(k + 1, ti);
                    set(mirror(k), ti);
                    set(mirror(k + 1), t);
                } else {
                    set(half - 1, t);
                    set(half, ti);
                }
            }
        }
        m
    }

    /// The torus element `Π α_k^∨(ζ^{x_k})`.
    pub fn torus_element(&self, x: &[u64]) -> Mat {
        let mut m = self.identity();
        for (k, &xk) in x.iter().enumerate() {
            m = self.mul(&m, &self.coroot(k, xk as i64));
        }
        m
    }

    /// Matrices of the generators of `Z^F` coming from the root datum.
    pub fn center_generators(&self) -> Result<Vec<Mat>> {
        let st = stabilizer_torus(&self.datum, &[])?;
        Ok(st
            .embedding_of_center
            .fixed_generators(self.field.q() as u64)
            .iter()
            .map(|x| self.torus_element(x))
            .collect())
    }

    /// `x_{α_i}(t)` for a simple root.
    pub fn root_element(&self, i: usize, t: u32) -> Mat {
        self.root_element_signed(i, t, true)
    }

    fn root_element_signed(&self, i: usize, t: u32, positive: bool) -> Mat {
        let f = &self.field;
        let mut m = self.identity();
        let n = self.degree;
        let (a, b) = match self.datum.label().family {
            Family::A => (i, i + 1),
            _ => {
                let half = n / 2;
                if i + 1 < half {
                    (i, i + 1)
                } else {
                    (half - 1, half)
                }
            }
        };
        let (a, b) = if positive { (a, b) } else { (b, a) };
        m[a * MAX_DEGREE + b] = t as u16;
        if self.datum.label().family == Family::C {
            let mirror = |x: usize| n - 1 - x;
            let eps = |x: usize| if x < n / 2 { 1i64 } else { -1 };
            let (ma, mb) = (mirror(b), mirror(a));
            if (ma, mb) != (a, b) {
                // x(t) = I + t(E_ab − ε_a ε_b E_{b'a'})
                let v = if eps(a) * eps(b) == 1 { f.neg(t) } else { t };
                m[ma * MAX_DEGREE + mb] = v as u16;
            }
        }
        m
    }

    /// `u_i` with `σ(x_{α_i}(1)) = x_{α_i}(ζ^{u_i})` for a conjugation `σ`
    /// normalizing the torus.
    pub fn simple_root_exponents(&self, sigma: &GroupAutomorphism) -> Result<Vec<i64>> {
        (0..self.datum.rank())
            .map(|i| {
                let m = self.root_element(i, 1);
                let idx = (0..MAX_DEGREE * MAX_DEGREE)
                    .find(|&k| k / MAX_DEGREE != k % MAX_DEGREE && m[k] == 1)
                    .expect("root element has an off-diagonal entry");
                let img = sigma.apply(self, &m);
                if img[idx] == 0 || img != self.root_element(i, img[idx] as u32) {
                    return Err(Error::InvalidAutomorphism(
                        "automorphism does not normalize the root subgroups".into(),
                    ));
                }
                Ok(self.field.log(img[idx] as u32).unwrap() as i64)
            })
            .collect()
    }

    /// Conjugation by `diag(ζ,1,…,1)` for `SL`, by the similitude
    /// `diag(ζ,…,ζ,1,…,1)` for `Sp`.
    pub fn diagonal_automorphism(&self) -> GroupAutomorphism {
        let z = self.field.zeta() as u16;
        let mut m = self.identity();
        let count = match self.datum.label().family {
            Family::A => 1,
            _ => self.degree / 2,
        };
        for i in 0..count {
            m[i * MAX_DEGREE + i] = z;
        }
        let inverse = self.inverse(&m).expect("diagonal is invertible");
        GroupAutomorphism::Conjugation { matrix: m, inverse }
    }

    pub fn field_automorphism(&self, j: u32) -> Result<GroupAutomorphism> {
        if j == 0 || j > self.field.n() {
            return Err(Error::InvalidInput(format!(
                "field automorphism level {j} outside 1..={}",
                self.field.n()
            )));
        }
        Ok(GroupAutomorphism::FieldPower(j))
    }

    /// Permutation `c ↦ class of σ(rep_c)`; fails unless `σ` maps the group
    /// onto itself and preserves class sizes and element orders.
    pub fn class_permutation(&self, sigma: &GroupAutomorphism) -> Result<Vec<usize>> {
        self.check_automorphism(sigma)?;
        let cd = self.classes();
        let mut perm = Vec::with_capacity(cd.len());
        let mut hit = vec![false; cd.len()];
        for (c, rep) in cd.representatives.iter().enumerate() {
            let img = sigma.apply(self, rep);
            let d = self.class_of(&img).ok_or_else(|| {
                Error::InvalidAutomorphism("image of a class representative left the group".into())
            })?;
            if hit[d] || cd.sizes[d] != cd.sizes[c] || cd.orders[d] != cd.orders[c] {
                return Err(Error::InvalidAutomorphism("classes are not permuted".into()));
            }
            hit[d] = true;
            perm.push(d);
        }
        Ok(perm)
    }

    pub fn check_automorphism(&self, sigma: &GroupAutomorphism) -> Result<()> {
        for g in &self.generators {
            if !self.contains(&sigma.apply(self, g)) {
                return Err(Error::InvalidAutomorphism(
                    "image of a generator is not in the group".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn export(&self) -> GroupExport {
        let cd = self.classes();
        GroupExport {
            schema_version: crate::SCHEMA_VERSION,
            type_label: self.datum.label().to_string(),
            p: self.field.p() as u64,
            n: self.field.n(),
            degree: self.degree,
            order: self.element_list().len() as u64,
            class_count: cd.len(),
            class_sizes: cd.sizes.clone(),
            class_orders: cd.orders.clone(),
            representatives: cd.representatives.iter().map(|r| self.rows(r)).collect(),
        }
    }
}

impl GroupAutomorphism {
    pub fn apply(&self, g: &MatGroup, m: &Mat) -> Mat {
        match self {
            Self::Conjugation { matrix, inverse } => g.mul(&g.mul(matrix, m), inverse),
            Self::FieldPower(j) => g.frobenius_power(m, *j),
            Self::Composite(parts) => parts.iter().fold(*m, |acc, s| s.apply(g, &acc)),
        }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        Self::Composite(vec![self.clone(), other.clone()])
    }

    pub fn power(&self, e: u32) -> Self {
        Self::Composite(vec![self.clone(); e as usize])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupExport {
    pub schema_version: u32,
    #[serde(rename = "type")]
    pub type_label: String,
    pub p: u64,
    pub n: u32,
    pub degree: usize,
    pub order: u64,
    pub class_count: usize,
    pub class_sizes: Vec<u64>,
    pub class_orders: Vec<u64>,
    pub representatives: Vec<Vec<Vec<u32>>>,
}

/// `SL_{r+1}(q)` for type `A_r`, `Sp_{2r}(q)` for type `C_r`.
pub fn build_group(d: &RootDatum, p: u64, n: u32, max_order: u64) -> Result<MatGroup> {
    let label = d.label();
    let degree = match label.family {
        Family::A => label.rank + 1,
        Family::C => 2 * label.rank,
        _ => 0,
    };
    if degree == 0 {
        return Err(Error::UnsupportedType(format!(
            "{label} has no matrix realization (SL_n, n ≤ {MAX_DEGREE}, or Sp_2m, 2m ≤ {MAX_DEGREE})"
        )));
    }
    let q = crate::twist::SplitFrobenius::standard(p, n)?.q();
    let order = group_order(d, q)?;
    let small = order.to_u64().filter(|&o| o <= max_order);
    let Some(order) = small else {
        return Err(Error::BoundExceeded {
            what: "group order",
            value: order.to_string(),
            bound: max_order.to_string(),
        });
    };
    if degree > MAX_DEGREE {
        return Err(Error::UnsupportedType(format!(
            "{label} has no matrix realization (SL_n, n ≤ {MAX_DEGREE}, or Sp_2m, 2m ≤ {MAX_DEGREE})"
        )));
    }
    if q > 1024 {
        return Err(Error::BoundExceeded {
            what: "field order for matrix groups",
            value: q.to_string(),
            bound: "1024".into(),
        });
    }
    let field = FqContext::new(p, n)?;
    let mut g = MatGroup {
        datum: d.clone(),
        field,
        degree,
        generators: Vec::new(),
        order,
        elements: OnceLock::new(),
        classes: OnceLock::new(),
    };
    let basis: Vec<u32> = (0..n).map(|k| (p as u32).pow(k)).collect();
    let mut gens = Vec::new();
    for i in 0..label.rank {
        for &b in &basis {
            gens.push(g.root_element_signed(i, b, true));
            gens.push(g.root_element_signed(i, b, false));
        }
    }
    g.generators = gens;
    Ok(g)
}
