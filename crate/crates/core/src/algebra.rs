//! Finite dimensional associative unital algebras given by structure constants.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::EngineError;
use crate::matrix::{Matrix, RowSolver, RowSpan};
use crate::scalar::{Field, Scalar};

/// An algebra of dimension d with basis b_0..b_{d-1}. `left_mult[i]` is the
/// d x d matrix whose row j holds the coordinates of b_i * b_j, so the
/// structure tensor is c[i][j][k] = left_mult[i][j][k].
#[derive(Debug)]
pub struct Algebra {
    field: Field,
    dim: usize,
    left_mult: Vec<Matrix>,
    unit: Vec<Scalar>,
    labels: Option<Vec<String>>,
    cache: AlgebraCache,
}

/// Memoized derived data; not part of the mathematical identity.
#[derive(Debug, Default)]
struct AlgebraCache {
    radical: std::sync::OnceLock<Option<Matrix>>,
    generators: std::sync::OnceLock<Vec<Vec<Scalar>>>,
    idempotents: std::sync::OnceLock<Option<Vec<Vec<Scalar>>>>,
}

impl Clone for Algebra {
    fn clone(&self) -> Self {
        Algebra {
            field: self.field,
            dim: self.dim,
            left_mult: self.left_mult.clone(),
            unit: self.unit.clone(),
            labels: self.labels.clone(),
            cache: AlgebraCache::default(),
        }
    }
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.dim == other.dim
            && self.left_mult == other.left_mult
            && self.unit == other.unit
    }
}

pub type AlgebraRef = Arc<Algebra>;

/// Structural identity of algebras; pointer equality is the fast path.
pub fn same_algebra(a: &AlgebraRef, b: &AlgebraRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Algebra {
    pub fn new(
        field: Field,
        left_mult: Vec<Matrix>,
        unit: Vec<Scalar>,
        labels: Option<Vec<String>>,
    ) -> Self {
        let dim = left_mult.len();
        assert!(dim >= 1, "algebra dimension must be at least 1");
        for m in &left_mult {
            assert_eq!((m.rows(), m.cols()), (dim, dim));
            assert_eq!(m.field(), field);
        }
        assert_eq!(unit.len(), dim);
        if let Some(l) = &labels {
            assert_eq!(l.len(), dim);
        }
        Algebra {
            field,
            dim,
            left_mult,
            unit,
            labels,
            cache: AlgebraCache::default(),
        }
    }

    pub fn from_tensor(
        field: Field,
        tensor: &[Vec<Vec<Scalar>>],
        unit: Vec<Scalar>,
        labels: Option<Vec<String>>,
    ) -> Self {
        let left_mult = tensor
            .iter()
            .map(|rows| Matrix::from_rows(field, rows.clone()))
            .collect();
        Algebra::new(field, left_mult, unit, labels)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => format!("b{i}"),
        }
    }

    /// c[i][j][k]
    pub fn structure(&self, i: usize, j: usize, k: usize) -> &Scalar {
        self.left_mult[i].get(j, k)
    }

    /// Coordinates of b_i * b_j.
    pub fn basis_product(&self, i: usize, j: usize) -> Vec<Scalar> {
        self.left_mult[i].row(j)
    }

    /// Product of two elements given by coordinate rows.
    pub fn mul_elements(&self, u: &[Scalar], v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(self.field); self.dim];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            // b_i * v = v * left_mult[i] in row convention
            for j in 0..self.dim {
                if v[j].is_zero() {
                    continue;
                }
                let prod = ui.mul(&v[j]);
                for k in 0..self.dim {
                    let c = self.structure(i, j, k);
                    if !c.is_zero() {
                        out[k] = out[k].add(&prod.mul(c));
                    }
                }
            }
        }
        out
    }

    /// Matrix of right multiplication by v: row i = coordinates of b_i * v.
    pub fn right_mult_matrix(&self, v: &[Scalar]) -> Matrix {
        let mut rows = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut row = vec![Scalar::zero(self.field); self.dim];
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                for k in 0..self.dim {
                    let c = self.structure(i, j, k);
                    if !c.is_zero() {
                        row[k] = row[k].add(&vj.mul(c));
                    }
                }
            }
            rows.push(row);
        }
        Matrix::from_rows(self.field, rows)
    }

    /// Matrix of left multiplication by v: row j = coordinates of v * b_j.
    pub fn left_mult_matrix(&self, v: &[Scalar]) -> Matrix {
        let mut out = Matrix::zero(self.field, self.dim, self.dim);
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            out = out.add(&self.left_mult[i].scale(vi));
        }
        out
    }

    /// Verify associativity on all basis triples and the two-sided unit law.
    pub fn check(&self) -> Result<(), EngineError> {
        // unit law: 1 * b_j = b_j and b_i * 1 = b_i
        let lm_unit = self.left_mult_matrix(&self.unit);
        let id = Matrix::identity(self.field, self.dim);
        if lm_unit != id {
            let j = (0..self.dim)
                .find(|&j| lm_unit.row_slice(j) != id.row_slice(j))
                .unwrap();
            return Err(EngineError::UnitLaw(j));
        }
        let rm_unit = self.right_mult_matrix(&self.unit);
        if rm_unit != id {
            let i = (0..self.dim)
                .find(|&i| rm_unit.row_slice(i) != id.row_slice(i))
                .unwrap();
            return Err(EngineError::UnitLaw(i));
        }
        // associativity: b_i (b_j b_k) = (b_i b_j) b_k for all triples,
        // checked as operator identities L_j L_i = sum_l c[i][j][l] L_l
        for i in 0..self.dim {
            for j in 0..self.dim {
                let lhs = self.left_mult[j].mul(&self.left_mult[i]);
                let rhs = self.left_mult_matrix(&self.basis_product(i, j));
                if lhs != rhs {
                    let k = (0..self.dim)
                        .find(|&k| lhs.row_slice(k) != rhs.row_slice(k))
                        .unwrap();
                    return Err(EngineError::NotAssociative(i, j, k));
                }
            }
        }
        Ok(())
    }

    pub fn opposite(&self) -> Algebra {
        let mut left_mult = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut rows = Vec::with_capacity(self.dim);
            for j in 0..self.dim {
                rows.push(self.basis_product(j, i));
            }
            left_mult.push(Matrix::from_rows(self.field, rows));
        }
        Algebra::new(self.field, left_mult, self.unit.clone(), self.labels.clone())
    }

    /// Basis of the Jacobson radical as rows, via the trace form of the
    /// regular representation (valid in characteristic 0 or p > dim).
    pub fn radical(&self) -> Result<Matrix, EngineError> {
        if let Some(r) = self.cache.radical.get() {
            return match r {
                Some(m) => Ok(m.clone()),
                None => Err(self.small_char_error()),
            };
        }
        let computed = self.radical_uncached();
        let cached = computed.as_ref().ok().cloned();
        let _ = self.cache.radical.set(cached);
        computed
    }

    fn small_char_error(&self) -> EngineError {
        match self.field {
            Field::Fp(p) => EngineError::SmallCharacteristic { p, dim: self.dim },
            Field::Q => unreachable!("radical never fails over Q"),
        }
    }

    fn radical_uncached(&self) -> Result<Matrix, EngineError> {
        if let Field::Fp(p) = self.field {
            if (p as usize) <= self.dim {
                return Err(EngineError::SmallCharacteristic { p, dim: self.dim });
            }
        }
        let mut gram = Matrix::zero(self.field, self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..=i {
                let t = Matrix::trace_of_product(&self.left_mult[i], &self.left_mult[j]);
                gram.set(i, j, t.clone());
                gram.set(j, i, t);
            }
        }
        let rad = gram.left_kernel_basis();
        debug_assert!(self.is_nilpotent_subspace(&rad));
        Ok(rad)
    }

    fn is_nilpotent_subspace(&self, basis: &Matrix) -> bool {
        let mut current = basis.clone();
        for _ in 0..=self.dim {
            if current.rows() == 0 {
                return true;
            }
            let mut next = RowSpan::new(self.field, self.dim);
            for i in 0..current.rows() {
                for j in 0..basis.rows() {
                    next.insert(&self.mul_elements(current.row_slice(i), basis.row_slice(j)));
                }
            }
            current = next.basis_matrix();
        }
        false
    }

    /// Dimension of rad^k (k >= 1) as a subspace.
    pub fn radical_power(&self, k: usize) -> Result<Matrix, EngineError> {
        let rad = self.radical()?;
        let mut current = rad.clone();
        for _ in 1..k {
            let mut next = RowSpan::new(self.field, self.dim);
            for i in 0..current.rows() {
                for j in 0..rad.rows() {
                    next.insert(&self.mul_elements(current.row_slice(i), rad.row_slice(j)));
                }
            }
            current = next.basis_matrix();
        }
        Ok(current)
    }

    /// The semisimple quotient A/rad with the projection and section data.
    pub fn semisimple_quotient(&self) -> Result<QuotientAlgebra, EngineError> {
        let rad = self.radical()?;
        let mut span = RowSpan::new(self.field, self.dim);
        for i in 0..rad.rows() {
            span.insert(rad.row_slice(i));
        }
        let pivots: Vec<usize> = span.pivots().to_vec();
        let complement: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let s_dim = complement.len();
        let project = |v: &[Scalar]| -> Vec<Scalar> {
            let reduced = span.reduce(v);
            complement.iter().map(|&c| reduced[c].clone()).collect()
        };
        let section = |u: &[Scalar]| -> Vec<Scalar> {
            let mut v = vec![Scalar::zero(self.field); self.dim];
            for (t, &c) in complement.iter().enumerate() {
                v[c] = u[t].clone();
            }
            v
        };
        let mut left_mult = Vec::with_capacity(s_dim);
        for i in 0..s_dim {
            let bi = section(&unit_vector(self.field, s_dim, i));
            let mut rows = Vec::with_capacity(s_dim);
            for j in 0..s_dim {
                let bj = section(&unit_vector(self.field, s_dim, j));
                rows.push(project(&self.mul_elements(&bi, &bj)));
            }
            left_mult.push(Matrix::from_rows(self.field, rows));
        }
        let unit = project(&self.unit);
        let quotient = Algebra::new(self.field, left_mult, unit, None);
        Ok(QuotientAlgebra {
            quotient,
            ambient_dim: self.dim,
            rad_span: span,
            complement,
        })
    }

    /// Complete list of orthogonal primitive idempotents summing to 1.
    /// Requires A/rad to be split, i.e. a product of copies of K.
    pub fn primitive_idempotents(&self) -> Result<Vec<Vec<Scalar>>, EngineError> {
        if let Some(cached) = self.cache.idempotents.get() {
            if let Some(es) = cached {
                return Ok(es.clone());
            }
            // fall through and recompute to surface the precise error
        }
        let computed = self.primitive_idempotents_uncached();
        let _ = self
            .cache
            .idempotents
            .set(computed.as_ref().ok().cloned());
        computed
    }

    fn primitive_idempotents_uncached(&self) -> Result<Vec<Vec<Scalar>>, EngineError> {
        let q = self.semisimple_quotient()?;
        let s = &q.quotient;
        // split basic semisimple quotients are commutative
        for i in 0..s.dim {
            for j in 0..i {
                if s.basis_product(i, j) != s.basis_product(j, i) {
                    return Err(EngineError::NonSplit(
                        "semisimple quotient is not commutative".into(),
                    ));
                }
            }
        }
        let parts = s.split_commutative_semisimple()?;
        // lift successively into corners so orthogonality is preserved
        let mut lifted: Vec<Vec<Scalar>> = Vec::new();
        let mut used = vec![Scalar::zero(self.field); self.dim];
        for (n, part) in parts.iter().enumerate() {
            if n + 1 == parts.len() {
                // the last idempotent is forced
                let mut e = self.unit.clone();
                for k in 0..self.dim {
                    e[k] = e[k].sub(&used[k]);
                }
                lifted.push(e);
                break;
            }
            let pre = q.section(part);
            // corner projection (1-f) pre (1-f) with f = sum of lifted so far
            let mut co = self.unit.clone();
            for k in 0..self.dim {
                co[k] = co[k].sub(&used[k]);
            }
            let mut e = self.mul_elements(&self.mul_elements(&co, &pre), &co);
            // Newton lift e <- 3e^2 - 2e^3 until idempotent
            let mut steps = 0;
            loop {
                let e2 = self.mul_elements(&e, &e);
                if e2 == e {
                    break;
                }
                steps += 1;
                assert!(steps <= 64, "idempotent lift failed to converge");
                let e3 = self.mul_elements(&e2, &e);
                for k in 0..self.dim {
                    let three = Scalar::from_int(self.field, 3);
                    let two = Scalar::from_int(self.field, 2);
                    e[k] = three.mul(&e2[k]).sub(&two.mul(&e3[k]));
                }
            }
            for k in 0..self.dim {
                used[k] = used[k].add(&e[k]);
            }
            lifted.push(e);
        }
        // sanity: pairwise orthogonal idempotents summing to 1
        for a in &lifted {
            debug_assert_eq!(self.mul_elements(a, a), *a);
        }
        let mut total = vec![Scalar::zero(self.field); self.dim];
        for e in &lifted {
            for k in 0..self.dim {
                total[k] = total[k].add(&e[k]);
            }
        }
        assert_eq!(total, self.unit, "idempotents do not sum to 1");
        Ok(lifted)
    }

    /// Decompose a commutative split semisimple algebra into the coordinate
    /// idempotents of K^n. Errors with NonSplit when some minimal polynomial
    /// does not split into distinct linear factors over the field.
    fn split_commutative_semisimple(&self) -> Result<Vec<Vec<Scalar>>, EngineError> {
        let mut blocks: Vec<Vec<Scalar>> = vec![self.unit.clone()];
        loop {
            let mut next = Vec::new();
            let mut progressed = false;
            for e in &blocks {
                match self.split_block(e)? {
                    Some(parts) => {
                        progressed = true;
                        next.extend(parts);
                    }
                    None => next.push(e.clone()),
                }
            }
            blocks = next;
            if !progressed {
                return Ok(blocks);
            }
        }
    }

    /// Try to split the block idempotent e; Ok(None) means eA is 1-dimensional.
    fn split_block(&self, e: &[Scalar]) -> Result<Option<Vec<Vec<Scalar>>>, EngineError> {
        // basis of eA
        let mut span = RowSpan::new(self.field, self.dim);
        for j in 0..self.dim {
            let bj = unit_vector(self.field, self.dim, j);
            span.insert(&self.mul_elements(e, &bj));
        }
        if span.dim() <= 1 {
            return Ok(None);
        }
        // find s in eA outside K*e with a splitting minimal polynomial
        let basis = span.basis_matrix();
        let mut e_span = RowSpan::new(self.field, self.dim);
        e_span.insert(e);
        for t in 0..basis.rows() {
            let s = basis.row(t);
            if e_span.contains(&s) {
                continue;
            }
            let minpoly = self.minimal_polynomial(e, &s);
            let deg = minpoly.len() - 1;
            debug_assert!(deg >= 2);
            let roots = polynomial_roots(self.field, &minpoly)?;
            if roots.len() != deg {
                return Err(EngineError::NonSplit(format!(
                    "minimal polynomial of degree {deg} has only {} roots in the field",
                    roots.len()
                )));
            }
            // Lagrange idempotents e_i = e * prod_{j != i} (s - r_j e)/(r_i - r_j)
            let mut parts = Vec::with_capacity(roots.len());
            for (i, ri) in roots.iter().enumerate() {
                let mut acc = e.to_vec();
                for (j, rj) in roots.iter().enumerate() {
                    if i == j {
                        continue;
                    }
                    let denom = ri.sub(rj).inv().expect("distinct roots");
                    let mut factor = s.clone();
                    for k in 0..self.dim {
                        factor[k] = factor[k].sub(&rj.mul(&e[k])).mul(&denom);
                    }
                    acc = self.mul_elements(&acc, &factor);
                }
                parts.push(acc);
            }
            return Ok(Some(parts));
        }
        // semisimple blocks of dim > 1 always contain a non-scalar element
        Err(EngineError::NonSplit(
            "block of dimension > 1 with only scalar elements".into(),
        ))
    }

    /// Monic minimal polynomial of s within the unital subalgebra with unit e,
    /// as a coefficient list [a_0, ..., a_{n-1}, 1].
    fn minimal_polynomial(&self, e: &[Scalar], s: &[Scalar]) -> Vec<Scalar> {
        let mut span = RowSpan::new(self.field, self.dim);
        let mut powers: Vec<Vec<Scalar>> = vec![e.to_vec()];
        span.insert(e);
        let mut current = s.to_vec();
        loop {
            if span.contains(&current) {
                let solver = RowSolver::new(&Matrix::from_rows(self.field, powers.clone()));
                let coeffs = solver.coordinates(&current).expect("in span");
                let mut poly: Vec<Scalar> = coeffs.iter().map(Scalar::neg).collect();
                poly.push(Scalar::one(self.field));
                return poly;
            }
            span.insert(&current);
            powers.push(current.clone());
            current = self.mul_elements(&current, s);
        }
    }

    /// Search for a linear functional l with l(xy) = l(yx) and nondegenerate
    /// Gram matrix l(b_i b_j). The sweep is deterministic: solution-space
    /// basis vectors first, then bounded-height integer combinations.
    pub fn symmetrizing_form(&self) -> FormSearch {
        // constraints: sum_k (c[i][j][k] - c[j][i][k]) l_k = 0
        let mut rows = Vec::new();
        for i in 0..self.dim {
            for j in 0..i {
                let pij = self.basis_product(i, j);
                let pji = self.basis_product(j, i);
                let row: Vec<Scalar> = (0..self.dim).map(|k| pij[k].sub(&pji[k])).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let space = if rows.is_empty() {
            Matrix::identity(self.field, self.dim)
        } else {
            Matrix::from_rows(self.field, rows).kernel_basis().transpose()
        };
        if space.rows() == 0 {
            return FormSearch::Absent;
        }
        let try_candidate = |lambda: &[Scalar]| -> Option<Vec<Scalar>> {
            if self.gram_rank(lambda) == self.dim {
                Some(lambda.to_vec())
            } else {
                None
            }
        };
        for i in 0..space.rows() {
            if let Some(l) = try_candidate(space.row_slice(i)) {
                return FormSearch::Found(l);
            }
        }
        // weighted combinations sum_i w^i v_i for small integer weights
        for w in 2..=8i64 {
            let ws = Scalar::from_int(self.field, w);
            let mut lambda = vec![Scalar::zero(self.field); self.dim];
            let mut weight = Scalar::one(self.field);
            for i in 0..space.rows() {
                for k in 0..self.dim {
                    lambda[k] = lambda[k].add(&weight.mul(space.get(i, k)));
                }
                weight = weight.mul(&ws);
            }
            if let Some(l) = try_candidate(&lambda) {
                return FormSearch::Found(l);
            }
        }
        // exhaustive small combinations of up to three basis vectors
        let s = space.rows().min(3);
        let mut coeffs = vec![0i64; s];
        loop {
            let mut idx = 0;
            while idx < s {
                coeffs[idx] += 1;
                if coeffs[idx] <= 8 {
                    break;
                }
                coeffs[idx] = -8;
                idx += 1;
            }
            if idx == s {
                break;
            }
            let mut lambda = vec![Scalar::zero(self.field); self.dim];
            for (i, &c) in coeffs.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let cs = Scalar::from_int(self.field, c);
                for k in 0..self.dim {
                    lambda[k] = lambda[k].add(&cs.mul(space.get(i, k)));
                }
            }
            if let Some(l) = try_candidate(&lambda) {
                return FormSearch::Found(l);
            }
        }
        FormSearch::Inconclusive
    }

    fn gram_rank(&self, lambda: &[Scalar]) -> usize {
        let mut gram = Matrix::zero(self.field, self.dim, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let p = self.basis_product(i, j);
                let mut v = Scalar::zero(self.field);
                for k in 0..self.dim {
                    if !p[k].is_zero() {
                        v = v.add(&p[k].mul(&lambda[k]));
                    }
                }
                gram.set(i, j, v);
            }
        }
        gram.rank()
    }

    /// The trivial extension T(A) = A + D(A) with multiplication
    /// (a,f)(b,g) = (ab, ag + fb).
    pub fn trivial_extension(&self) -> Algebra {
        let d = self.dim;
        let field = self.field;
        let dim2 = 2 * d;
        let mut left_mult = Vec::with_capacity(dim2);
        for i in 0..dim2 {
            let mut rows = Vec::with_capacity(dim2);
            for j in 0..dim2 {
                let mut row = vec![Scalar::zero(field); dim2];
                match (i < d, j < d) {
                    (true, true) => {
                        let p = self.basis_product(i, j);
                        row[..d].clone_from_slice(&p);
                    }
                    (true, false) => {
                        // b_i * b_{j-d}^*: value at b_k is c[k][i][j-d]
                        let jj = j - d;
                        for k in 0..d {
                            row[d + k] = self.structure(k, i, jj).clone();
                        }
                    }
                    (false, true) => {
                        // b_{i-d}^* * b_j: value at b_k is c[j][k][i-d]
                        let ii = i - d;
                        for k in 0..d {
                            row[d + k] = self.structure(j, k, ii).clone();
                        }
                    }
                    (false, false) => {}
                }
                rows.push(row);
            }
            left_mult.push(Matrix::from_rows(field, rows));
        }
        let mut unit = vec![Scalar::zero(field); dim2];
        unit[..d].clone_from_slice(&self.unit);
        let labels = self.labels.as_ref().map(|ls| {
            let mut out = ls.clone();
            out.extend(ls.iter().map(|l| format!("{l}*")));
            out
        });
        Algebra::new(field, left_mult, unit, labels)
    }

    /// A generating set of the algebra: the unit plus lifts of a basis of
    /// rad/rad^2 plus lifts of a basis of A/(K + rad). Every basis element is
    /// a product of these, which is what the Hom-space solvers rely on.
    pub fn generators(&self) -> Vec<Vec<Scalar>> {
        self.cache
            .generators
            .get_or_init(|| match self.generators_inner() {
                Ok(g) => g,
                // fall back to the full basis when the radical is unavailable
                Err(_) => (0..self.dim)
                    .map(|i| unit_vector(self.field, self.dim, i))
                    .collect(),
            })
            .clone()
    }

    fn generators_inner(&self) -> Result<Vec<Vec<Scalar>>, EngineError> {
        let rad = self.radical()?;
        let rad2 = self.radical_power(2)?;
        let mut gens: Vec<Vec<Scalar>> = Vec::new();
        // basis of the semisimple part: idempotents would do, but lifts of a
        // complement of rad in A are enough and cheaper
        let mut span = RowSpan::new(self.field, self.dim);
        for i in 0..rad.rows() {
            span.insert(rad.row_slice(i));
        }
        for j in 0..self.dim {
            let v = unit_vector(self.field, self.dim, j);
            if span.insert(&v) {
                gens.push(v);
            }
        }
        // lifts of a basis of rad/rad^2
        let mut span2 = RowSpan::new(self.field, self.dim);
        for i in 0..rad2.rows() {
            span2.insert(rad2.row_slice(i));
        }
        for i in 0..rad.rows() {
            if span2.insert(rad.row_slice(i)) {
                gens.push(rad.row(i));
            }
        }
        // verify: products of gens span the whole algebra
        let mut closure = RowSpan::new(self.field, self.dim);
        closure.insert(&self.unit);
        for g in &gens {
            closure.insert(g);
        }
        loop {
            let mut grew = false;
            let current = closure.basis_matrix();
            for i in 0..current.rows() {
                for g in &gens {
                    if closure.insert(&self.mul_elements(current.row_slice(i), g)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if closure.dim() < self.dim {
            // not a generating set (can happen for exotic tensors); caller
            // falls back to the full basis
            return Err(EngineError::Precondition("generator closure too small".into()));
        }
        Ok(gens)
    }
}

pub fn unit_vector(field: Field, dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(field); dim];
    v[i] = Scalar::one(field);
    v
}

/// A/rad together with projection/section data.
pub struct QuotientAlgebra {
    pub quotient: Algebra,
    ambient_dim: usize,
    rad_span: RowSpan,
    complement: Vec<usize>,
}

impl QuotientAlgebra {
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let reduced = self.rad_span.reduce(v);
        self.complement.iter().map(|&c| reduced[c].clone()).collect()
    }

    pub fn section(&self, u: &[Scalar]) -> Vec<Scalar> {
        let field = self.quotient.field();
        let mut v = vec![Scalar::zero(field); self.ambient_dim];
        for (t, &c) in self.complement.iter().enumerate() {
            v[c] = u[t].clone();
        }
        v
    }
}

/// Outcome of the symmetrizing-form sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum FormSearch {
    Found(Vec<Scalar>),
    /// Only the zero functional satisfies the symmetry constraints.
    Absent,
    /// The sweep was exhausted without a nondegenerate candidate.
    Inconclusive,
}

impl FormSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, FormSearch::Found(_))
    }
}

/// Rational (or F_p) roots of a monic polynomial given by coefficients
/// [a_0, ..., a_{n-1}, 1].
fn polynomial_roots(field: Field, poly: &[Scalar]) -> Result<Vec<Scalar>, EngineError> {
    match field {
        Field::Fp(p) => {
            if p > 1 << 16 {
                return Err(EngineError::Precondition(format!(
                    "root finding over Fp needs p <= 2^16, got {p}"
                )));
            }
            let mut roots = Vec::new();
            for r in 0..p {
                let x = Scalar::Fp { val: r, p };
                if eval_poly(poly, &x).is_zero() {
                    roots.push(x);
                }
            }
            Ok(roots)
        }
        Field::Q => rational_roots(poly),
    }
}

fn eval_poly(poly: &[Scalar], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero(x.field());
    for c in poly.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

fn rational_roots(poly: &[Scalar]) -> Result<Vec<Scalar>, EngineError> {
    // substitute t = u/c with c the lcm of denominators: monic integer poly in u
    let rats: Vec<BigRational> = poly
        .iter()
        .map(|s| match s {
            Scalar::Q(q) => q.clone(),
            _ => unreachable!(),
        })
        .collect();
    let mut c = BigInt::one();
    for q in &rats {
        c = c.lcm(q.denom());
    }
    let n = rats.len() - 1;
    // integer coefficients of u^n + sum c^{n-i} a_i u^i
    let mut int_coeffs: Vec<BigInt> = Vec::with_capacity(n + 1);
    for (i, q) in rats.iter().enumerate().take(n) {
        let scaled = q * BigRational::from_integer(c.pow((n - i) as u32));
        debug_assert!(scaled.denom().is_one());
        int_coeffs.push(scaled.numer().clone());
    }
    int_coeffs.push(BigInt::one());

    let mut roots = Vec::new();
    let mut coeffs = int_coeffs;
    // strip zero roots
    while coeffs[0].is_zero() && coeffs.len() > 1 {
        roots.push(Scalar::Q(BigRational::zero()));
        coeffs.remove(0);
    }
    if coeffs.len() > 1 {
        let divisors = signed_divisors(&coeffs[0])?;
        for u in divisors {
            let x = BigRational::from_integer(u.clone());
            let mut acc = BigRational::zero();
            for co in coeffs.iter().rev() {
                acc = acc * &x + BigRational::from_integer(co.clone());
            }
            if acc.is_zero() {
                roots.push(Scalar::Q(BigRational::new(u, c.clone())));
            }
        }
    }
    Ok(roots)
}

fn signed_divisors(n: &BigInt) -> Result<Vec<BigInt>, EngineError> {
    let mut m = n.abs();
    if m.is_zero() {
        return Ok(vec![]);
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut d = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &d * &d <= m && d <= limit {
        let mut e = 0u32;
        while (&m % &d).is_zero() {
            m = &m / &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1;
    }
    if !m.is_one() {
        // trial division stopped at the limit: m is only known prime when
        // the limit exceeded sqrt(m)
        if &d * &d <= m {
            return Err(EngineError::Precondition(format!(
                "cannot factor constant term {n} for rational root search"
            )));
        }
        factors.push((m, 1));
    }
    let mut divisors = vec![BigInt::one()];
    for (p, e) in factors {
        let mut next = Vec::new();
        for dv in &divisors {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pe);
                pe = &pe * &p;
            }
        }
        divisors = next;
    }
    let mut out = Vec::with_capacity(divisors.len() * 2);
    for dv in divisors {
        out.push(dv.clone());
        out.push(-dv);
    }
    // deterministic order: by absolute value then sign
    out.sort_by(|a, b| a.abs().cmp(&b.abs()).then(b.cmp(a)));
    Ok(out)
}

impl FromStr for Algebra {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::io::algebra_from_json_str(s)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// K[x]/(x^2) with basis {1, x}.
    pub fn dual_numbers() -> Algebra {
        let f = Field::Q;
        let l0 = Matrix::from_int_rows(f, &[&[1, 0], &[0, 1]]);
        let l1 = Matrix::from_int_rows(f, &[&[0, 1], &[0, 0]]);
        Algebra::new(
            f,
            vec![l0, l1],
            vec![Scalar::one(f), Scalar::zero(f)],
            Some(vec!["1".into(), "x".into()]),
        )
    }

    /// K x K with componentwise multiplication.
    fn k_times_k() -> Algebra {
        let f = Field::Q;
        let l0 = Matrix::from_int_rows(f, &[&[1, 0], &[0, 0]]);
        let l1 = Matrix::from_int_rows(f, &[&[0, 0], &[0, 1]]);
        Algebra::new(
            f,
            vec![l0, l1],
            vec![Scalar::one(f), Scalar::one(f)],
            None,
        )
    }

    /// The field K as a 1-dimensional algebra.
    fn base_field() -> Algebra {
        let f = Field::Q;
        Algebra::new(
            f,
            vec![Matrix::identity(f, 1)],
            vec![Scalar::one(f)],
            None,
        )
    }

    #[test]
    fn check_passes_for_valid_algebras() {
        assert!(dual_numbers().check().is_ok());
        assert!(k_times_k().check().is_ok());
        assert!(base_field().check().is_ok());
    }

    #[test]
    fn corrupted_tensor_fails_check() {
        // k[x]/(x^3), basis {1, x, x^2}, then corrupt x^2 * x = 1:
        // (x x) x = 1 while x (x x) = x x^2 = 0
        let f = Field::Q;
        let mut mult_x = Matrix::zero(f, 3, 3);
        mult_x.set(0, 1, Scalar::one(f));
        mult_x.set(1, 2, Scalar::one(f));
        let mut mult_x2 = Matrix::zero(f, 3, 3);
        mult_x2.set(0, 2, Scalar::one(f));
        mult_x2.set(1, 0, Scalar::one(f)); // the corruption
        let unit = vec![Scalar::one(f), Scalar::zero(f), Scalar::zero(f)];
        let a = Algebra::new(f, vec![Matrix::identity(f, 3), mult_x, mult_x2], unit, None);
        assert!(matches!(a.check(), Err(EngineError::NotAssociative(..))));
    }

    #[test]
    fn radical_of_dual_numbers() {
        let a = dual_numbers();
        let rad = a.radical().unwrap();
        assert_eq!(rad.rows(), 1);
        // spanned by x
        assert!(rad.get(0, 0).is_zero());
        assert!(!rad.get(0, 1).is_zero());
    }

    #[test]
    fn radical_of_semisimple_is_zero() {
        assert_eq!(base_field().radical().unwrap().rows(), 0);
        assert_eq!(k_times_k().radical().unwrap().rows(), 0);
    }

    #[test]
    fn idempotents_of_k_times_k() {
        let a = k_times_k();
        let es = a.primitive_idempotents().unwrap();
        assert_eq!(es.len(), 2);
        for e in &es {
            assert_eq!(a.mul_elements(e, e), *e);
        }
        assert!(a.mul_elements(&es[0], &es[1]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn idempotents_of_local_algebra() {
        let a = dual_numbers();
        let es = a.primitive_idempotents().unwrap();
        assert_eq!(es.len(), 1);
        assert_eq!(es[0], a.unit);
    }

    #[test]
    fn opposite_involution() {
        let a = dual_numbers();
        assert_eq!(a.opposite().opposite(), a);
        // commutative algebra: opposite has the identical tensor
        assert_eq!(a.opposite(), a);
    }

    #[test]
    fn symmetrizing_form_dual_numbers() {
        let a = dual_numbers();
        let FormSearch::Found(l) = a.symmetrizing_form() else {
            panic!("expected a symmetrizing form");
        };
        // the coefficient-of-x functional works; whatever the sweep found
        // must have full Gram rank, which gram_rank already verified
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn symmetrizing_form_k_times_k() {
        assert!(k_times_k().symmetrizing_form().is_found());
    }

    #[test]
    fn trivial_extension_dimensions_and_symmetry() {
        let t = dual_numbers().trivial_extension();
        assert_eq!(t.dim(), 4);
        assert!(t.check().is_ok());
        assert!(t.symmetrizing_form().is_found());

        let tk = base_field().trivial_extension();
        assert_eq!(tk.dim(), 2);
        assert!(tk.check().is_ok());
    }

    #[test]
    fn generators_generate() {
        let a = dual_numbers();
        let gens = a.generators();
        assert!(!gens.is_empty());
    }

    #[test]
    fn rational_root_extraction() {
        // (t - 1/2)(t + 3) = t^2 + 5/2 t - 3/2
        let poly = vec![
            Scalar::from_ratio(Field::Q, -3, 2).unwrap(),
            Scalar::from_ratio(Field::Q, 5, 2).unwrap(),
            Scalar::one(Field::Q),
        ];
        let mut roots = rational_roots(&poly).unwrap();
        roots.sort_by_key(|r| r.to_string());
        assert!(roots.contains(&Scalar::from_ratio(Field::Q, 1, 2).unwrap()));
        assert!(roots.contains(&Scalar::from_int(Field::Q, -3)));
        assert_eq!(roots.len(), 2);
    }
}
