//! Constructors for the algebra families the engine ships with:
//! quantum complete intersections, Liu-Schulz algebras, quantum 2-exterior
//! algebras, and the cyclic modules M_c = A/(x+cy)A.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{Algebra, AlgebraRef};
use crate::error::EngineError;
use crate::matrix::Matrix;
use crate::module::Module;
use crate::scalar::{unity_order, Field, Scalar};

/// K<x_1..x_n>/(x_i^{a_i}, x_i x_j + q_{i,j} x_j x_i) for i > j.
#[derive(Debug, Clone)]
pub struct QciParams {
    pub field: Field,
    pub exponents: Vec<usize>,
    /// q[(i, j)] for i > j, zero-based generator indices; all nonzero.
    pub q: BTreeMap<(usize, usize), Scalar>,
}

impl QciParams {
    pub fn validate(&self) -> Result<(), EngineError> {
        let n = self.exponents.len();
        if n == 0 {
            return Err(EngineError::Precondition("need at least one generator".into()));
        }
        for &a in &self.exponents {
            if a < 2 {
                return Err(EngineError::Precondition(format!(
                    "exponent {a} < 2 is not allowed"
                )));
            }
        }
        for i in 1..n {
            for j in 0..i {
                match self.q.get(&(i, j)) {
                    Some(v) if !v.is_zero() => {}
                    Some(_) => {
                        return Err(EngineError::Precondition(format!(
                            "coefficient q[{i},{j}] must be nonzero"
                        )))
                    }
                    None => {
                        return Err(EngineError::Precondition(format!(
                            "missing coefficient q[{i},{j}]"
                        )))
                    }
                }
            }
        }
        Ok(())
    }
}

/// PBW basis monomial: exponent of each generator.
type Monomial = Vec<usize>;

fn enumerate_monomials(exponents: &[usize]) -> Vec<Monomial> {
    let mut all = vec![vec![]];
    for &a in exponents {
        let mut next = Vec::new();
        for m in &all {
            for e in 0..a {
                let mut m2 = m.clone();
                m2.push(e);
                next.push(m2);
            }
        }
        all = next;
    }
    // order by total degree, then lexicographically descending, which yields
    // 1, x, y, z, xy, xz, yz, xyz for three square-zero generators
    all.sort_by(|a, b| {
        let da: usize = a.iter().sum();
        let db: usize = b.iter().sum();
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    all
}

fn monomial_label(m: &Monomial) -> String {
    let names = ["x", "y", "z", "w", "u", "v"];
    if m.iter().all(|&e| e == 0) {
        return "1".to_string();
    }
    let mut s = String::new();
    for (i, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = if m.len() <= names.len() {
            names[i].to_string()
        } else {
            format!("x{}", i + 1)
        };
        s.push_str(&name);
        if e > 1 {
            s.push_str(&format!("^{e}"));
        }
    }
    s
}

/// Normal-order the concatenation of two monomial words; returns the
/// resulting coefficient and normal form, or None when a power vanishes.
fn normal_order(
    params: &QciParams,
    left: &Monomial,
    right: &Monomial,
) -> Option<(Scalar, Monomial)> {
    // expand to a word of generator indices
    let mut word: Vec<usize> = Vec::new();
    for m in [left, right] {
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                word.push(i);
            }
        }
    }
    let mut coeff = Scalar::one(params.field);
    // bubble sort, each swap of x_i x_j with i > j contributes -q_{i,j}
    loop {
        let mut swapped = false;
        for pos in 0..word.len().saturating_sub(1) {
            let (a, b) = (word[pos], word[pos + 1]);
            if a > b {
                let q = &params.q[&(a, b)];
                coeff = coeff.mul(&q.neg());
                word.swap(pos, pos + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    let mut result = vec![0usize; params.exponents.len()];
    for i in word {
        result[i] += 1;
        if result[i] >= params.exponents[i] {
            return None;
        }
    }
    Some((coeff, result))
}

/// Build the quantum complete intersection on its PBW basis.
pub fn quantum_complete_intersection(params: &QciParams) -> Result<Algebra, EngineError> {
    params.validate()?;
    let field = params.field;
    let monomials = enumerate_monomials(&params.exponents);
    let dim = monomials.len();
    let index: BTreeMap<Monomial, usize> = monomials
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let mut left_mult = Vec::with_capacity(dim);
    for mi in &monomials {
        let mut rows = Vec::with_capacity(dim);
        for mj in &monomials {
            let mut row = vec![Scalar::zero(field); dim];
            if let Some((coeff, nf)) = normal_order(params, mi, mj) {
                row[index[&nf]] = coeff;
            }
            rows.push(row);
        }
        left_mult.push(Matrix::from_rows(field, rows));
    }
    let mut unit = vec![Scalar::zero(field); dim];
    unit[index[&vec![0; params.exponents.len()]]] = Scalar::one(field);
    let labels = monomials.iter().map(monomial_label).collect();
    let algebra = Algebra::new(field, left_mult, unit, Some(labels));
    algebra.check()?;
    Ok(algebra)
}

/// Liu-Schulz algebra K<x,y,z>/(x^2,y^2,z^2, yx+rxy, zy+ryz, xz+rzx).
pub fn liu_schulz(field: Field, r: &Scalar) -> Result<Algebra, EngineError> {
    if r.is_zero() {
        return Err(EngineError::Precondition("r must be nonzero".into()));
    }
    let r_inv = r.inv().unwrap();
    let mut q = BTreeMap::new();
    q.insert((1, 0), r.clone()); // yx = -r xy
    q.insert((2, 0), r_inv); // zx = -r^{-1} xz, from xz + r zx = 0
    q.insert((2, 1), r.clone()); // zy = -r yz
    quantum_complete_intersection(&QciParams {
        field,
        exponents: vec![2, 2, 2],
        q,
    })
}

/// Quantum 2-exterior algebra K<x,y>/(x^2, y^2, xy + a yx).
pub fn quantum_exterior_2(field: Field, a: &Scalar) -> Result<Algebra, EngineError> {
    if a.is_zero() {
        return Err(EngineError::Precondition("a must be nonzero".into()));
    }
    let mut q = BTreeMap::new();
    // xy = -a yx, so yx = -a^{-1} xy
    q.insert((1, 0), a.inv().unwrap());
    quantum_complete_intersection(&QciParams {
        field,
        exponents: vec![2, 2],
        q,
    })
}

/// Coordinates of the element x + c*y in a Liu-Schulz (or any labelled)
/// algebra with degree-one basis elements named x and y.
pub fn x_plus_cy(algebra: &Algebra, c: &Scalar) -> Vec<Scalar> {
    let labels = algebra.labels().expect("labelled algebra");
    let xi = labels.iter().position(|l| l == "x").expect("basis element x");
    let yi = labels.iter().position(|l| l == "y").expect("basis element y");
    let mut v = vec![Scalar::zero(algebra.field()); algebra.dim()];
    v[xi] = Scalar::one(algebra.field());
    v[yi] = c.clone();
    v
}

/// The right module M_c = A/(x+cy)A over the Liu-Schulz algebra.
pub fn module_mc(algebra: &AlgebraRef, c: &Scalar) -> Result<Module, EngineError> {
    if c.is_zero() {
        return Err(EngineError::Precondition(
            "M_c requires a nonzero parameter c".into(),
        ));
    }
    let reg = Module::regular(algebra);
    let sub = reg.submodule_generated(&[x_plus_cy(algebra, c)]);
    Ok(reg.quotient(&sub)?.module)
}

/// The submodule (x+cy)A of the regular module.
pub fn submodule_x_plus_cy(algebra: &AlgebraRef, c: &Scalar) -> Module {
    let reg = Module::regular(algebra);
    reg.submodule_generated(&[x_plus_cy(algebra, c)]).module
}

/// Validity flags the Liu-Schulz statements depend on.
#[derive(Debug, Clone, serde::Serialize)]
pub struct LiuSchulzFlags {
    pub r_squared_is_one: bool,
    pub r_cubed_is_one: bool,
    /// Multiplicative order of r when it is a root of unity within the bound.
    pub unity_order: Option<usize>,
}

pub fn liu_schulz_flags(r: &Scalar, bound: usize) -> LiuSchulzFlags {
    let one = Scalar::one(r.field());
    LiuSchulzFlags {
        r_squared_is_one: r.mul(r) == one,
        r_cubed_is_one: r.mul(r).mul(r) == one,
        unity_order: unity_order(r, bound),
    }
}

/// Construct the Liu-Schulz algebra behind an Arc, the form every module
/// constructor wants.
pub fn liu_schulz_ref(field: Field, r: &Scalar) -> Result<AlgebraRef, EngineError> {
    Ok(Arc::new(liu_schulz(field, r)?))
}

/// One grid cell of the Lemma-2.6 style table: computed Hom/Ext dimensions
/// next to their closed-form predictions, plus the bounded Ext-tail verdict
/// against the r^l-orbit criterion.
#[derive(Debug, Clone)]
pub struct Lemma26Cell {
    pub c: Scalar,
    pub d: Scalar,
    pub hom_dim: usize,
    pub hom_predicted: usize,
    pub ext1_dim: usize,
    pub ext1_predicted: usize,
    /// First index in 1..=bound with Ext^i != 0, if any.
    pub tail_first_nonzero: Option<usize>,
    /// The closed-form criterion: d differs from r^l c for 0 <= l <= bound+2.
    pub tail_predicted_vanishing: bool,
    pub agree: bool,
}

#[derive(Debug, Clone)]
pub struct Lemma26Table {
    pub r: Scalar,
    pub bound: usize,
    pub cells: Vec<Lemma26Cell>,
}

impl Lemma26Table {
    pub fn all_agree(&self) -> bool {
        self.cells.iter().all(|c| c.agree)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.r.to_string(),
            "bound": self.bound,
            "all_agree": self.all_agree(),
            "cells": self.cells.iter().map(|cell| serde_json::json!({
                "c": cell.c.to_string(),
                "d": cell.d.to_string(),
                "hom": { "computed": cell.hom_dim, "predicted": cell.hom_predicted },
                "ext1": { "computed": cell.ext1_dim, "predicted": cell.ext1_predicted },
                "tail": {
                    "first_nonzero": cell.tail_first_nonzero,
                    "predicted_vanishing": cell.tail_predicted_vanishing,
                },
                "agree": cell.agree,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("Lemma 2.6 grid, r = {}, bound H = {}\n", self.r, self.bound);
        out.push_str("c\td\thom\tpred\text1\tpred\ttail\tpred\tagree\n");
        for cell in &self.cells {
            let tail = match cell.tail_first_nonzero {
                None => "0".to_string(),
                Some(i) => format!("!{i}"),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                cell.c,
                cell.d,
                cell.hom_dim,
                cell.hom_predicted,
                cell.ext1_dim,
                cell.ext1_predicted,
                tail,
                if cell.tail_predicted_vanishing { "0" } else { "!" },
                if cell.agree { "yes" } else { "NO" },
            ));
        }
        out
    }
}

/// Is d on the forward r-orbit of c, i.e. d = r^l c for some 0 <= l <= reach?
pub fn on_r_orbit(r: &Scalar, c: &Scalar, d: &Scalar, reach: usize) -> bool {
    let mut v = c.clone();
    for _ in 0..=reach {
        if &v == d {
            return true;
        }
        v = v.mul(r);
    }
    false
}

/// Decide exactly whether d = r^t c for SOME t >= 0 (no truncation). Over Q
/// the reduced height max(|num|, |den|) of r^t grows strictly once it
/// exceeds 1, which bounds the search by the height of d/c; over F_p the
/// orbit is finite.
pub fn on_infinite_r_orbit(r: &Scalar, c: &Scalar, d: &Scalar) -> bool {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed};

    match r {
        Scalar::Q(rq) => {
            fn height(q: &BigRational) -> BigInt {
                let n = q.numer().abs();
                let d = q.denom().abs();
                if n > d {
                    n
                } else {
                    d
                }
            }
            if height(rq) <= BigInt::one() {
                // r is 1 or -1: the orbit is {c, rc}
                return d == c || &c.mul(r) == d;
            }
            let target = match d.div(c) {
                Some(Scalar::Q(t)) => t,
                _ => return false,
            };
            let th = height(&target);
            let mut v = BigRational::one();
            loop {
                if v == target {
                    return true;
                }
                v *= rq;
                if height(&v) > th {
                    return false;
                }
            }
        }
        Scalar::Fp { p, .. } => {
            let mut v = c.clone();
            for _ in 0..*p {
                if &v == d {
                    return true;
                }
                v = v.mul(r);
            }
            false
        }
    }
}

/// The full Hom/Ext1/Ext-tail grid over the M_c family with closed-form
/// predictions: dim Hom(M_c, M_d) = 2 + [c=d] + [cr^2=d], the four-term
/// Ext^1 count, and tail vanishing iff d avoids the r-orbit of c.
pub fn lemma26_table(
    field: Field,
    r: &Scalar,
    cs: &[Scalar],
    bound: usize,
) -> Result<Lemma26Table, EngineError> {
    use crate::homological::ExtCalculator;

    if r.is_zero() || cs.iter().any(Scalar::is_zero) {
        return Err(EngineError::Precondition("r and all c must be nonzero".into()));
    }
    for (i, c) in cs.iter().enumerate() {
        if cs[i + 1..].contains(c) {
            return Err(EngineError::Precondition("c values must be distinct".into()));
        }
    }
    let algebra = liu_schulz_ref(field, r)?;
    let modules: Vec<Module> = cs
        .iter()
        .map(|c| module_mc(&algebra, c))
        .collect::<Result<_, _>>()?;
    let delta = |p: bool| usize::from(p);
    let mut cells = Vec::with_capacity(cs.len() * cs.len());
    for (i, c) in cs.iter().enumerate() {
        let mut calc = ExtCalculator::new(&modules[i])?;
        let r2 = r.mul(r);
        let r3 = r2.mul(r);
        for (j, d) in cs.iter().enumerate() {
            let hom_dim = calc.ext_dim(&modules[j], 0)?;
            let hom_predicted = 2 + delta(c == d) + delta(&c.mul(&r2) == d);
            let ext1_dim = calc.ext_dim(&modules[j], 1)?;
            let ext1_predicted = (2 + delta(c == d) + delta(&c.mul(&r2) == d))
                + (2 + delta(&c.mul(r) == d) + delta(&c.mul(&r3) == d))
                - 4;
            let mut tail_first_nonzero = None;
            for k in 1..=bound {
                if calc.ext_dim(&modules[j], k)? != 0 {
                    tail_first_nonzero = Some(k);
                    break;
                }
            }
            let tail_predicted_vanishing = !on_r_orbit(r, c, d, bound + 2);
            let agree = hom_dim == hom_predicted
                && ext1_dim == ext1_predicted
                && tail_first_nonzero.is_none() == tail_predicted_vanishing;
            cells.push(Lemma26Cell {
                c: c.clone(),
                d: d.clone(),
                hom_dim,
                hom_predicted,
                ext1_dim,
                ext1_predicted,
                tail_first_nonzero,
                tail_predicted_vanishing,
                agree,
            });
        }
    }
    Ok(Lemma26Table {
        r: r.clone(),
        bound,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FormSearch;

    fn r2() -> Scalar {
        Scalar::from_int(Field::Q, 2)
    }

    #[test]
    fn liu_schulz_basics() {
        let a = liu_schulz(Field::Q, &r2()).unwrap();
        assert_eq!(a.dim(), 8);
        assert!(a.check().is_ok());
        let rad = a.radical().unwrap();
        assert_eq!(rad.rows(), 7); // local
        assert!(a.symmetrizing_form().is_found());
    }

    #[test]
    fn liu_schulz_r_one_still_eight_dimensional() {
        let a = liu_schulz(Field::Q, &Scalar::one(Field::Q)).unwrap();
        assert_eq!(a.dim(), 8);
    }

    #[test]
    fn liu_schulz_rejects_zero() {
        assert!(liu_schulz(Field::Q, &Scalar::zero(Field::Q)).is_err());
    }

    #[test]
    fn radical_powers() {
        let a = liu_schulz(Field::Q, &r2()).unwrap();
        assert!(a.radical_power(3).unwrap().rows() > 0); // xyz in rad^3
        assert_eq!(a.radical_power(4).unwrap().rows(), 0);
    }

    #[test]
    fn mc_dimension_four() {
        let a = liu_schulz_ref(Field::Q, &r2()).unwrap();
        for c in 1..=5 {
            let mc = module_mc(&a, &Scalar::from_int(Field::Q, c)).unwrap();
            assert_eq!(mc.dim(), 4);
        }
        assert!(module_mc(&a, &Scalar::zero(Field::Q)).is_err());
    }

    #[test]
    fn x_plus_cy_submodule_dimension() {
        let a = liu_schulz_ref(Field::Q, &r2()).unwrap();
        let sub = submodule_x_plus_cy(&a, &Scalar::one(Field::Q));
        assert_eq!(sub.dim(), 4);
    }

    #[test]
    fn quantum_exterior_dimension() {
        let e = quantum_exterior_2(Field::Q, &r2()).unwrap();
        assert_eq!(e.dim(), 4);
        assert!(e.check().is_ok());
    }

    #[test]
    fn trivial_extension_of_quantum_exterior_is_symmetric_local() {
        let e = quantum_exterior_2(Field::Q, &r2()).unwrap();
        let t = e.trivial_extension();
        assert_eq!(t.dim(), 8);
        assert!(t.check().is_ok());
        assert!(matches!(t.symmetrizing_form(), FormSearch::Found(_)));
        assert_eq!(t.radical().unwrap().rows(), 7); // local
    }

    #[test]
    fn qci_special_cases() {
        // n=1, a=3: K[x]/(x^3)
        let p = QciParams {
            field: Field::Q,
            exponents: vec![3],
            q: BTreeMap::new(),
        };
        let a = quantum_complete_intersection(&p).unwrap();
        assert_eq!(a.dim(), 3);

        // dimension is the product of the exponents
        let mut q = BTreeMap::new();
        q.insert((1, 0), Scalar::from_int(Field::Q, 3));
        let p = QciParams {
            field: Field::Q,
            exponents: vec![2, 4],
            q,
        };
        assert_eq!(quantum_complete_intersection(&p).unwrap().dim(), 8);
    }

    #[test]
    fn qci_matches_liu_schulz_tensor() {
        let r = r2();
        let ls = liu_schulz(Field::Q, &r).unwrap();
        let mut q = BTreeMap::new();
        q.insert((1, 0), r.clone());
        q.insert((2, 0), r.inv().unwrap());
        q.insert((2, 1), r.clone());
        let qci = quantum_complete_intersection(&QciParams {
            field: Field::Q,
            exponents: vec![2, 2, 2],
            q,
        })
        .unwrap();
        assert_eq!(ls, qci);
    }

    #[test]
    fn lemma26_small_grid_agrees() {
        let cs: Vec<Scalar> = [1, 2, 3]
            .iter()
            .map(|&c| Scalar::from_int(Field::Q, c))
            .collect();
        let table = lemma26_table(Field::Q, &r2(), &cs, 5).unwrap();
        assert_eq!(table.cells.len(), 9);
        assert!(table.all_agree(), "{}", table.render_text());
        // spot checks: diagonal Hom is 3, Ext^1(M_1, M_2) != 0 since 2 = r*1
        let diag = table
            .cells
            .iter()
            .find(|cell| cell.c == cell.d)
            .unwrap();
        assert_eq!(diag.hom_dim, 3);
        let c12 = table
            .cells
            .iter()
            .find(|cell| {
                cell.c == Scalar::from_int(Field::Q, 1) && cell.d == Scalar::from_int(Field::Q, 2)
            })
            .unwrap();
        assert!(c12.ext1_dim > 0);
        assert!(!c12.tail_predicted_vanishing);
    }

    #[test]
    fn flags() {
        let f = liu_schulz_flags(&r2(), 12);
        assert!(!f.r_squared_is_one);
        assert!(!f.r_cubed_is_one);
        assert_eq!(f.unity_order, None);
        let f1 = liu_schulz_flags(&Scalar::from_int(Field::Q, -1), 12);
        assert!(f1.r_squared_is_one);
        assert_eq!(f1.unity_order, Some(2));
    }
}
