//! Right modules as matrix representations, together with Hom spaces,
//! direct sums, sub/quotient constructions, covers, envelopes and syzygies.
//!
//! Convention: module elements are coordinate rows; the basis element b_i of
//! the algebra acts as v -> v * action(i). A map f: M -> N is a
//! dim(M) x dim(N) matrix with action_M(b) * f = f * action_N(b).

use std::sync::Arc;

use crate::algebra::{same_algebra, unit_vector, Algebra, AlgebraRef};
use crate::error::EngineError;
use crate::matrix::{Matrix, RowSolver, RowSpan};
use crate::scalar::{Field, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct Module {
    algebra: AlgebraRef,
    dim: usize,
    actions: Vec<Matrix>,
}

impl Module {
    pub fn new(algebra: AlgebraRef, actions: Vec<Matrix>) -> Self {
        assert_eq!(actions.len(), algebra.dim());
        let dim = actions.first().map_or(0, Matrix::rows);
        for a in &actions {
            assert_eq!((a.rows(), a.cols()), (dim, dim));
        }
        let m = Module {
            algebra,
            dim,
            actions,
        };
        debug_assert!(m.verify_module_law());
        m
    }

    /// The regular right module A_A.
    pub fn regular(algebra: &AlgebraRef) -> Self {
        let d = algebra.dim();
        let actions = (0..d)
            .map(|j| {
                let mut rows = Vec::with_capacity(d);
                for i in 0..d {
                    rows.push(algebra.basis_product(i, j));
                }
                Matrix::from_rows(algebra.field(), rows)
            })
            .collect();
        Module::new(Arc::clone(algebra), actions)
    }

    pub fn zero_module(algebra: &AlgebraRef) -> Self {
        let actions = vec![Matrix::zero(algebra.field(), 0, 0); algebra.dim()];
        Module {
            algebra: Arc::clone(algebra),
            dim: 0,
            actions,
        }
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.actions[i]
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn action_of(&self, v: &[Scalar]) -> Matrix {
        let mut out = Matrix::zero(self.field(), self.dim, self.dim);
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            out = out.add(&self.actions[i].scale(vi));
        }
        out
    }

    pub fn verify_module_law(&self) -> bool {
        let unit_action = self.action_of(self.algebra.unit());
        if unit_action != Matrix::identity(self.field(), self.dim) {
            return false;
        }
        let d = self.algebra.dim();
        for i in 0..d {
            for j in 0..d {
                let lhs = self.actions[i].mul(&self.actions[j]);
                let rhs = self.action_of(&self.algebra.basis_product(i, j));
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// Direct sum with injections and projections.
    pub fn direct_sum(parts: &[&Module]) -> Result<DirectSum, EngineError> {
        let first = parts.first().ok_or(EngineError::EmptySum)?;
        for p in parts {
            if !same_algebra(&first.algebra, &p.algebra) {
                return Err(EngineError::AlgebraMismatch);
            }
        }
        let field = first.field();
        let total: usize = parts.iter().map(|p| p.dim).sum();
        let actions = (0..first.algebra.dim())
            .map(|i| {
                let blocks: Vec<&Matrix> = parts.iter().map(|p| p.action(i)).collect();
                Matrix::block_diag(field, &blocks)
            })
            .collect();
        let sum = Module::new(Arc::clone(&first.algebra), actions);
        let mut injections = Vec::with_capacity(parts.len());
        let mut projections = Vec::with_capacity(parts.len());
        let mut offset = 0;
        for p in parts {
            let mut inj = Matrix::zero(field, p.dim, total);
            let mut proj = Matrix::zero(field, total, p.dim);
            for r in 0..p.dim {
                inj.set(r, offset + r, Scalar::one(field));
                proj.set(offset + r, r, Scalar::one(field));
            }
            injections.push(inj);
            projections.push(proj);
            offset += p.dim;
        }
        Ok(DirectSum {
            module: sum,
            injections,
            projections,
        })
    }

    /// Smallest submodule containing the given vectors, with inclusion map.
    pub fn submodule_generated(&self, vectors: &[Vec<Scalar>]) -> Submodule {
        let mut span = RowSpan::new(self.field(), self.dim);
        let mut queue: Vec<Vec<Scalar>> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), self.dim);
            if span.insert(v) {
                queue.push(v.clone());
            }
        }
        let mut idx = 0;
        while idx < queue.len() {
            let v = queue[idx].clone();
            for a in &self.actions {
                let w = Matrix::from_rows(self.field(), vec![v.clone()]).mul(a).row(0);
                if span.insert(&w) {
                    queue.push(w);
                }
            }
            idx += 1;
        }
        self.submodule_from_span(span)
    }

    /// Wrap an RREF span that is already closed under the action.
    fn submodule_from_span(&self, span: RowSpan) -> Submodule {
        let basis = span.basis_matrix();
        let s = basis.rows();
        let solver = if s > 0 { Some(RowSolver::new(&basis)) } else { None };
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let mut rows = Vec::with_capacity(s);
                for i in 0..s {
                    let img = Matrix::from_rows(self.field(), vec![basis.row(i)]).mul(a).row(0);
                    let coords = solver
                        .as_ref()
                        .unwrap()
                        .coordinates(&img)
                        .expect("span not closed under the action");
                    rows.push(coords);
                }
                if s == 0 {
                    Matrix::zero(self.field(), 0, 0)
                } else {
                    Matrix::from_rows(self.field(), rows)
                }
            })
            .collect();
        let module = Module::new(Arc::clone(&self.algebra), actions);
        Submodule {
            module,
            inclusion: basis,
        }
    }

    /// Submodule spanned by the rows of `rows` (closure is taken).
    pub fn submodule_spanned(&self, rows: &Matrix) -> Submodule {
        let vectors: Vec<Vec<Scalar>> = (0..rows.rows()).map(|i| rows.row(i)).collect();
        self.submodule_generated(&vectors)
    }

    /// Quotient by a submodule, with the projection map. The quotient basis
    /// is the pivot-column complement of the RREF inclusion.
    pub fn quotient(&self, sub: &Submodule) -> Result<Quotient, EngineError> {
        // verify the inclusion really lands in a submodule of self
        if sub.inclusion.cols() != self.dim {
            return Err(EngineError::NotSubmodule(
                "inclusion has the wrong ambient dimension".into(),
            ));
        }
        let mut span = RowSpan::new(self.field(), self.dim);
        for i in 0..sub.inclusion.rows() {
            span.insert(sub.inclusion.row_slice(i));
        }
        if span.dim() != sub.module.dim() {
            return Err(EngineError::NotSubmodule("inclusion rows are dependent".into()));
        }
        for i in 0..sub.inclusion.rows() {
            for a in &self.actions {
                let img = Matrix::from_rows(self.field(), vec![sub.inclusion.row(i)])
                    .mul(a)
                    .row(0);
                if !span.contains(&img) {
                    return Err(EngineError::NotSubmodule(
                        "subspace is not closed under the action".into(),
                    ));
                }
            }
        }
        let complement: Vec<usize> = (0..self.dim)
            .filter(|c| !span.pivots().contains(c))
            .collect();
        let qdim = complement.len();
        let project = |v: &[Scalar]| -> Vec<Scalar> {
            let r = span.reduce(v);
            complement.iter().map(|&c| r[c].clone()).collect()
        };
        let mut projection = Matrix::zero(self.field(), self.dim, qdim);
        for i in 0..self.dim {
            let p = project(&unit_vector(self.field(), self.dim, i));
            for (j, x) in p.into_iter().enumerate() {
                projection.set(i, j, x);
            }
        }
        let actions = self
            .actions
            .iter()
            .map(|a| {
                let mut rows = Vec::with_capacity(qdim);
                for &c in &complement {
                    let img = a.row(c);
                    rows.push(project(&img));
                }
                if qdim == 0 {
                    Matrix::zero(self.field(), 0, 0)
                } else {
                    Matrix::from_rows(self.field(), rows)
                }
            })
            .collect();
        let module = Module::new(Arc::clone(&self.algebra), actions);
        Ok(Quotient { module, projection })
    }

    /// The dual module over the opposite algebra; actions are transposes.
    pub fn dual(&self) -> Module {
        let op = Arc::new(self.algebra.opposite());
        let actions = self.actions.iter().map(Matrix::transpose).collect();
        Module::new(op, actions)
    }

    /// M * rad(A) as a submodule.
    pub fn radical_submodule(&self) -> Result<Submodule, EngineError> {
        let rad = self.algebra.radical()?;
        let mut span = RowSpan::new(self.field(), self.dim);
        for r in 0..rad.rows() {
            let act = self.action_of(rad.row_slice(r));
            for i in 0..self.dim {
                span.insert(act.row_slice(i));
            }
        }
        Ok(self.submodule_from_span(span))
    }

    pub fn top(&self) -> Result<Quotient, EngineError> {
        let rad = self.radical_submodule()?;
        self.quotient(&rad)
    }

    /// Socle: the largest semisimple submodule, computed as the annihilator
    /// of rad(A).
    pub fn socle(&self) -> Result<Submodule, EngineError> {
        let rad = self.algebra.radical()?;
        if rad.rows() == 0 {
            return Ok(Submodule {
                module: self.clone(),
                inclusion: Matrix::identity(self.field(), self.dim),
            });
        }
        // v with v * action(r) = 0 for all radical basis elements r
        let mut stacked: Option<Matrix> = None;
        for r in 0..rad.rows() {
            let act = self.action_of(rad.row_slice(r));
            stacked = Some(match stacked {
                None => act,
                Some(s) => s.hstack(&act),
            });
        }
        let ker = stacked.unwrap().left_kernel_basis();
        let mut span = RowSpan::new(self.field(), self.dim);
        for i in 0..ker.rows() {
            span.insert(ker.row_slice(i));
        }
        Ok(self.submodule_from_span(span))
    }
}

pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<Matrix>,
    pub projections: Vec<Matrix>,
}

#[derive(Debug, Clone)]
pub struct Submodule {
    pub module: Module,
    /// dim(sub) x dim(ambient), rows are the embedded basis.
    pub inclusion: Matrix,
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub module: Module,
    /// dim(ambient) x dim(quotient).
    pub projection: Matrix,
}

/// A homomorphism of right modules.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleMap {
    pub source: Module,
    pub target: Module,
    pub matrix: Matrix,
}

impl ModuleMap {
    pub fn new(source: Module, target: Module, matrix: Matrix) -> Self {
        assert_eq!((matrix.rows(), matrix.cols()), (source.dim(), target.dim()));
        debug_assert!(intertwines(&source, &target, &matrix));
        ModuleMap {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(m: &Module) -> Self {
        ModuleMap::new(m.clone(), m.clone(), Matrix::identity(m.field(), m.dim()))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.target.dim()
    }

    pub fn is_injective_map(&self) -> bool {
        self.rank() == self.source.dim()
    }

    /// Kernel as a submodule of the source.
    pub fn kernel(&self) -> Submodule {
        let ker = self.matrix.left_kernel_basis();
        let mut span = RowSpan::new(self.source.field(), self.source.dim());
        for i in 0..ker.rows() {
            span.insert(ker.row_slice(i));
        }
        self.source.submodule_from_span(span)
    }

    /// Image as a submodule of the target.
    pub fn image(&self) -> Submodule {
        let mut span = RowSpan::new(self.target.field(), self.target.dim());
        for i in 0..self.matrix.rows() {
            span.insert(self.matrix.row_slice(i));
        }
        self.target.submodule_from_span(span)
    }

    /// Cokernel of the map.
    pub fn cokernel(&self) -> Quotient {
        let img = self.image();
        self.target.quotient(&img).expect("image is a submodule")
    }

    pub fn compose(&self, then: &ModuleMap) -> ModuleMap {
        assert_eq!(self.target.dim(), then.source.dim());
        ModuleMap::new(
            self.source.clone(),
            then.target.clone(),
            self.matrix.mul(&then.matrix),
        )
    }
}

pub fn intertwines(source: &Module, target: &Module, f: &Matrix) -> bool {
    for i in 0..source.algebra().dim() {
        if source.action(i).mul(f) != f.mul(target.action(i)) {
            return false;
        }
    }
    true
}

/// A basis of Hom(M, N).
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub source: Module,
    pub target: Module,
    pub basis: Vec<Matrix>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn map(&self, i: usize) -> ModuleMap {
        ModuleMap::new(
            self.source.clone(),
            self.target.clone(),
            self.basis[i].clone(),
        )
    }

    /// Flatten a map matrix to a coefficient row and back.
    pub fn flatten(f: &Matrix) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(f.rows() * f.cols());
        for i in 0..f.rows() {
            v.extend(f.row(i));
        }
        v
    }

    pub fn unflatten(field: Field, rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, v[i * cols + j].clone());
            }
        }
        m
    }

    /// Coefficient matrix whose rows are the flattened basis maps.
    pub fn basis_rows(&self) -> Matrix {
        let field = self.source.field();
        let rows: Vec<Vec<Scalar>> = self.basis.iter().map(HomSpace::flatten).collect();
        if rows.is_empty() {
            Matrix::zero(field, 0, self.source.dim() * self.target.dim())
        } else {
            Matrix::from_rows(field, rows)
        }
    }
}

/// Solve the intertwiner equations for a basis of Hom(M, N). The equations
/// are imposed for a generating set of the algebra only.
pub fn hom_space(m: &Module, n: &Module) -> Result<HomSpace, EngineError> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(EngineError::AlgebraMismatch);
    }
    let field = m.field();
    let (md, nd) = (m.dim(), n.dim());
    if md == 0 || nd == 0 {
        return Ok(HomSpace {
            source: m.clone(),
            target: n.clone(),
            basis: vec![],
        });
    }
    let gens = m.algebra().generators();
    // unknowns: entries of f (md * nd); equations: rho_m(g) f - f rho_n(g) = 0
    let unknowns = md * nd;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for g in &gens {
        let am = m.action_of(g);
        let an = n.action_of(g);
        // equation for entry (i, j): sum_k am[i][k] f[k][j] - sum_l f[i][l] an[l][j] = 0
        for i in 0..md {
            for j in 0..nd {
                let mut row = vec![Scalar::zero(field); unknowns];
                for k in 0..md {
                    let c = am.get(i, k);
                    if !c.is_zero() {
                        row[k * nd + j] = row[k * nd + j].add(c);
                    }
                }
                for l in 0..nd {
                    let c = an.get(l, j);
                    if !c.is_zero() {
                        row[i * nd + l] = row[i * nd + l].sub(c);
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let basis = if rows.is_empty() {
        (0..unknowns)
            .map(|t| {
                let mut v = vec![Scalar::zero(field); unknowns];
                v[t] = Scalar::one(field);
                HomSpace::unflatten(field, md, nd, &v)
            })
            .collect()
    } else {
        let system = Matrix::from_rows(field, rows);
        let ker = system.kernel_basis(); // columns
        (0..ker.cols())
            .map(|c| {
                let v: Vec<Scalar> = (0..unknowns).map(|r| ker.get(r, c).clone()).collect();
                HomSpace::unflatten(field, md, nd, &v)
            })
            .collect()
    };
    for f in &basis {
        debug_assert!(intertwines(m, n, f));
    }
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        basis,
    })
}

/// The indecomposable projective e_t A for a primitive idempotent e_t,
/// as a submodule of the regular module.
pub fn projective_indecomposables(
    algebra: &AlgebraRef,
) -> Result<Vec<Submodule>, EngineError> {
    let idems = algebra.primitive_idempotents()?;
    let reg = Module::regular(algebra);
    Ok(idems
        .iter()
        .map(|e| reg.submodule_generated(&[e.clone()]))
        .collect())
}

/// Projective cover data: P -> M with kernel inside rad P.
pub struct Cover {
    pub map: ModuleMap,
    /// Multiplicity of each indecomposable projective in P, indexed like
    /// `projective_indecomposables`.
    pub multiplicities: Vec<usize>,
}

/// Minimal projective cover of m. Split algebras only: every simple is
/// 1-dimensional, so multiplicities can be read off top(m) * e_t.
pub fn projective_cover(m: &Module) -> Result<Cover, EngineError> {
    let algebra = m.algebra();
    let idems = algebra.primitive_idempotents()?;
    let projectives = projective_indecomposables(algebra)?;
    let top = m.top()?;
    if top.module.dim() == 0 {
        let p = Module::zero_module(algebra);
        return Ok(Cover {
            map: ModuleMap::new(
                p.clone(),
                m.clone(),
                Matrix::zero(m.field(), 0, m.dim()),
            ),
            multiplicities: vec![0; idems.len()],
        });
    }
    // generators of m adapted to the idempotent decomposition: for each t,
    // a basis of top(m) * e_t lifted to m and multiplied by e_t
    let field = m.field();
    let mut summands: Vec<&Module> = Vec::new();
    let mut generator_rows: Vec<Vec<Scalar>> = Vec::new();
    let mut multiplicities = vec![0usize; idems.len()];
    let mut chosen: Vec<usize> = Vec::new(); // projective index per summand
    // lift basis vectors of top * e_t: work in m directly
    let mut top_span = RowSpan::new(field, top.module.dim());
    for (t, e) in idems.iter().enumerate() {
        let top_e = top.module.action_of(e);
        // rank of the idempotent action on top gives the multiplicity; take
        // m-vectors v with v*e = v projecting onto a basis of top*e_t
        let e_act_m = m.action_of(e);
        for i in 0..m.dim() {
            let v = e_act_m.row(i); // (basis_i) * e, lies in m * e_t
            let vbar = Matrix::from_rows(field, vec![v.clone()])
                .mul(&top.projection)
                .row(0);
            // keep v when its top image enlarges the span and lies in top*e_t
            let vbar_e = Matrix::from_rows(field, vec![vbar.clone()])
                .mul(&top_e)
                .row(0);
            if vbar_e != vbar {
                continue;
            }
            if top_span.insert(&vbar) {
                generator_rows.push(v);
                summands.push(&projectives[t].module);
                chosen.push(t);
                multiplicities[t] += 1;
            }
        }
    }
    if top_span.dim() != top.module.dim() {
        return Err(EngineError::NonSplit(
            "top does not decompose over the idempotents; algebra not split".into(),
        ));
    }
    let ds = Module::direct_sum(&summands.iter().copied().collect::<Vec<_>>())?;
    // map: generator u of e_t A (embedded in A) sends to w * action(u)
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (s, w) in generator_rows.iter().enumerate() {
        let t = chosen[s];
        let inc = &projectives[t].inclusion;
        for r in 0..inc.rows() {
            let u = inc.row(r); // element of A
            let img = Matrix::from_rows(field, vec![w.clone()])
                .mul(&m.action_of(&u))
                .row(0);
            rows.push(img);
        }
    }
    let matrix = Matrix::from_rows(field, rows);
    let map = ModuleMap::new(ds.module, m.clone(), matrix);
    assert!(map.is_surjective(), "projective cover must be surjective");
    Ok(Cover {
        map,
        multiplicities,
    })
}

/// kappa: End(P) -> K for an indecomposable module with local endomorphism
/// ring: u = kappa(u) * id + nilpotent, so kappa(u) = tr(u)/dim.
fn local_residue(u: &Matrix) -> Scalar {
    let d = u.rows();
    let dd = Scalar::from_int(u.field(), d as i64);
    u.trace().div(&dd).expect("dimension invertible in the field")
}

/// Split off all projective direct summands; returns the summand-free part
/// and the total dimension stripped.
pub fn strip_projective_summands(m: &Module) -> Result<(Module, usize), EngineError> {
    let algebra = m.algebra();
    let projectives = projective_indecomposables(algebra)?;
    let mut current = m.clone();
    let mut stripped = 0usize;
    'outer: loop {
        if current.dim() == 0 {
            break;
        }
        for p in &projectives {
            let pm = &p.module;
            if pm.dim() > current.dim() {
                continue;
            }
            let into = hom_space(pm, &current)?;
            let back = hom_space(&current, pm)?;
            for f in &into.basis {
                for g in &back.basis {
                    let u = f.mul(g); // endomorphism of P
                    if u.is_zero() {
                        continue;
                    }
                    if local_residue(&u).is_zero() {
                        continue;
                    }
                    // u invertible since End(P) is local; split off P
                    let u_inv = u.invert()?.expect("non-radical endomorphism is invertible");
                    let retraction = g.mul(&u_inv); // current -> P with f*retraction = id_P
                    debug_assert_eq!(
                        f.mul(&retraction),
                        Matrix::identity(m.field(), pm.dim())
                    );
                    let ker = ModuleMap::new(current.clone(), pm.clone(), retraction).kernel();
                    stripped += pm.dim();
                    current = ker.module;
                    continue 'outer;
                }
            }
        }
        break;
    }
    Ok((current, stripped))
}

/// Generator test: A lies in add(m), i.e. every indecomposable projective is
/// a direct summand of m. Retraction search via the local-residue pairing,
/// exactly as in `strip_projective_summands`.
pub fn is_generator(m: &Module) -> Result<bool, EngineError> {
    let projectives = projective_indecomposables(m.algebra())?;
    for p in &projectives {
        let pm = &p.module;
        let into = hom_space(pm, m)?;
        let back = hom_space(m, pm)?;
        let mut found = false;
        'search: for f in &into.basis {
            for g in &back.basis {
                let u = f.mul(g);
                if !u.is_zero() && !local_residue(&u).is_zero() {
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Syzygies: Omega^0 strips projective summands; Omega^k iterates kernels of
/// minimal projective covers.
pub fn syzygy(m: &Module, k: usize) -> Result<Module, EngineError> {
    let (mut current, _) = strip_projective_summands(m)?;
    for _ in 0..k {
        if current.dim() == 0 {
            return Ok(current);
        }
        let cover = projective_cover(&current)?;
        current = cover.map.kernel().module;
    }
    Ok(current)
}

pub fn is_projective(m: &Module) -> Result<bool, EngineError> {
    if m.dim() == 0 {
        return Ok(true);
    }
    let cover = projective_cover(m)?;
    Ok(cover.map.source.dim() == m.dim())
}

/// Injective envelope by duality: E(m) = D(P(D(m))) over the opposite algebra.
pub struct Envelope {
    pub map: ModuleMap,
}

pub fn injective_envelope(m: &Module) -> Result<Envelope, EngineError> {
    let dual = m.dual();
    let cover = projective_cover(&dual)?;
    let env = cover.map.source.dual(); // module over (A^op)^op
    let env = transport(env, m.algebra());
    let matrix = cover.map.matrix.transpose(); // m -> E(m)
    Ok(Envelope {
        map: ModuleMap::new(m.clone(), env, matrix),
    })
}

/// Rewrap a module over a structurally equal algebra behind the given Arc.
pub fn transport(m: Module, algebra: &AlgebraRef) -> Module {
    assert!(same_algebra(m.algebra(), algebra), "algebra mismatch in transport");
    Module::new(Arc::clone(algebra), m.actions)
}

pub fn is_injective(m: &Module) -> Result<bool, EngineError> {
    is_projective(&m.dual())
}

/// Cosyzygies: Omega^{-k}, iterated cokernels of minimal injective envelopes.
/// Omega^{-0} strips injective summands (dual convention to `syzygy`).
pub fn cosyzygy(m: &Module, k: usize) -> Result<Module, EngineError> {
    let d = syzygy(&m.dual(), k)?;
    Ok(transport(d.dual(), m.algebra()))
}

pub fn is_selfinjective(algebra: &AlgebraRef) -> Result<bool, EngineError> {
    is_injective(&Module::regular(algebra))
}

/// Result of the isomorphism test.
#[derive(Debug, Clone)]
pub enum IsoCertificate {
    Iso(Matrix),
    NonIso(String),
    Unknown,
}

impl IsoCertificate {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoCertificate::Iso(_))
    }
}

/// Dimensions of the radical filtration layers M rad^k / M rad^{k+1}.
pub fn radical_layer_dims(m: &Module) -> Result<Vec<usize>, EngineError> {
    let mut layers = Vec::new();
    let mut current = m.clone();
    while current.dim() > 0 {
        let rad = current.radical_submodule()?;
        layers.push(current.dim() - rad.module.dim());
        if rad.module.dim() == current.dim() {
            // radical did not shrink: cannot happen for nilpotent radicals
            break;
        }
        current = rad.module;
    }
    Ok(layers)
}

/// Decide isomorphism: cheap invariants first, then a deterministic sweep of
/// the hom-space basis and bounded integer combinations for an invertible
/// intertwiner.
pub fn isomorphism_test(m: &Module, n: &Module) -> Result<IsoCertificate, EngineError> {
    if !same_algebra(m.algebra(), n.algebra()) {
        return Err(EngineError::AlgebraMismatch);
    }
    if m.dim() != n.dim() {
        return Ok(IsoCertificate::NonIso(format!(
            "dim {} != {}",
            m.dim(),
            n.dim()
        )));
    }
    if m.dim() == 0 {
        return Ok(IsoCertificate::Iso(Matrix::zero(m.field(), 0, 0)));
    }
    let lm = radical_layer_dims(m)?;
    let ln = radical_layer_dims(n)?;
    if lm != ln {
        return Ok(IsoCertificate::NonIso(format!(
            "radical layers {lm:?} != {ln:?}"
        )));
    }
    let hom_mn = hom_space(m, n)?;
    let end_m = hom_space(m, m)?.dim();
    let end_n = hom_space(n, n)?.dim();
    if end_m != hom_mn.dim() || end_n != hom_mn.dim() {
        return Ok(IsoCertificate::NonIso(format!(
            "dim End(m) = {end_m}, dim Hom(m,n) = {}, dim End(n) = {end_n}",
            hom_mn.dim()
        )));
    }
    // sweep: basis maps first
    for f in &hom_mn.basis {
        if f.invert()?.is_some() {
            return Ok(IsoCertificate::Iso(f.clone()));
        }
    }
    // moment-curve sweep: f(t) = sum t^k f_k. det(f(t)) restricted to the
    // curve is a polynomial of degree <= dim * (k-1), so trying that many
    // distinct t finds an invertible point whenever the curve meets the
    // (open, nonempty for isomorphic modules) invertible locus.
    let k = hom_mn.dim();
    let attempts = (m.dim() * k.saturating_sub(1) + 2).min(600);
    for t in 1..=attempts as i64 {
        let tv = Scalar::from_int(m.field(), t);
        let mut weight = Scalar::one(m.field());
        let mut acc = Matrix::zero(m.field(), m.dim(), n.dim());
        for f in &hom_mn.basis {
            acc = acc.add(&f.scale(&weight));
            weight = weight.mul(&tv);
        }
        if acc.invert()?.is_some() {
            return Ok(IsoCertificate::Iso(acc));
        }
    }
    // small integer combinations over up to 3 basis maps
    for take in 2..=3usize.min(k) {
        for indices in combinations(k, take) {
            let mut coeffs = vec![-2i64; take];
            loop {
                if coeffs.iter().any(|&c| c != 0) {
                    let mut acc = Matrix::zero(m.field(), m.dim(), n.dim());
                    for (pos, &i) in indices.iter().enumerate() {
                        if coeffs[pos] != 0 {
                            let s = Scalar::from_int(m.field(), coeffs[pos]);
                            acc = acc.add(&hom_mn.basis[i].scale(&s));
                        }
                    }
                    if acc.invert()?.is_some() {
                        return Ok(IsoCertificate::Iso(acc));
                    }
                }
                if !next_tuple(&mut coeffs, -2, 2) {
                    break;
                }
            }
        }
    }
    Ok(IsoCertificate::Unknown)
}

/// All strictly increasing index tuples of the given length from 0..n.
fn combinations(n: usize, take: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..take).collect();
    if take > n {
        return out;
    }
    loop {
        out.push(current.clone());
        // advance
        let mut i = take;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - (take - i) {
                current[i] += 1;
                for j in i + 1..take {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
}

/// Odometer step over tuples with entries in lo..=hi; false when exhausted.
fn next_tuple(t: &mut [i64], lo: i64, hi: i64) -> bool {
    for x in t.iter_mut() {
        *x += 1;
        if *x <= hi {
            return true;
        }
        *x = lo;
    }
    false
}

/// End(m)/rad End(m) is 1-dimensional iff m is indecomposable (split case).
pub fn is_indecomposable(m: &Module) -> Result<bool, EngineError> {
    if m.dim() == 0 {
        return Ok(false);
    }
    let end = endomorphism_algebra(m)?;
    let rad = end.radical()?;
    Ok(end.dim() - rad.rows() == 1)
}

/// The endomorphism algebra End(m) as an abstract algebra (multiplication is
/// composition in diagram order: (f * g)(v) = g(f(v)) -- the convention under
/// which Hom(m, -) produces right modules).
pub fn endomorphism_algebra(m: &Module) -> Result<Algebra, EngineError> {
    let end = hom_space(m, m)?;
    let d = end.dim();
    let field = m.field();
    assert!(d > 0);
    let solver = RowSolver::new(&end.basis_rows());
    let mut left_mult = Vec::with_capacity(d);
    let mut unit = None;
    for i in 0..d {
        let mut rows = Vec::with_capacity(d);
        for j in 0..d {
            // e_i * e_j acts as: first e_i then e_j, matrix e_i * e_j in row conv
            let prod = end.basis[i].mul(&end.basis[j]);
            let coords = solver
                .coordinates(&HomSpace::flatten(&prod))
                .expect("hom space closed under composition");
            rows.push(coords);
        }
        left_mult.push(Matrix::from_rows(field, rows));
    }
    let id = HomSpace::flatten(&Matrix::identity(field, m.dim()));
    unit.replace(solver.coordinates(&id).expect("identity is an endomorphism"));
    Ok(Algebra::new(field, left_mult, unit.unwrap(), None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn liu_schulz_r2() -> AlgebraRef {
        Arc::new(families::liu_schulz(Field::Q, &Scalar::from_int(Field::Q, 2)).unwrap())
    }

    #[test]
    fn regular_module_law() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        assert!(reg.verify_module_law());
        assert_eq!(reg.dim(), 8);
    }

    #[test]
    fn hom_from_regular_is_evaluation() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let mc = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        let h = hom_space(&reg, &mc).unwrap();
        assert_eq!(h.dim(), mc.dim());
    }

    #[test]
    fn direct_sum_dims() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let mc = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        let ds = Module::direct_sum(&[&reg, &mc]).unwrap();
        assert_eq!(ds.module.dim(), 12);
        let zero = Module::zero_module(&a);
        let ds2 = Module::direct_sum(&[&mc, &zero]).unwrap();
        assert_eq!(ds2.module.dim(), mc.dim());
        assert!(Module::direct_sum(&[]).is_err());
    }

    #[test]
    fn submodule_and_quotient_of_regular() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        // (x + y) A: generator x + 1*y, basis labels {1,x,y,z,xy,xz,yz,xyz}
        let mut gen = vec![Scalar::zero(Field::Q); 8];
        gen[1] = Scalar::one(Field::Q);
        gen[2] = Scalar::one(Field::Q);
        let sub = reg.submodule_generated(&[gen]);
        assert_eq!(sub.module.dim(), 4);
        let q = reg.quotient(&sub).unwrap();
        assert_eq!(q.module.dim(), 4);
        // m / 0 = m, m / m = 0
        let zero_sub = reg.submodule_generated(&[]);
        assert_eq!(reg.quotient(&zero_sub).unwrap().module.dim(), 8);
        let full = reg.submodule_generated(&[a.unit().to_vec()]);
        assert_eq!(reg.quotient(&full).unwrap().module.dim(), 0);
    }

    #[test]
    fn dual_is_involution() {
        let a = liu_schulz_r2();
        let mc = families::module_mc(&a, &Scalar::from_int(Field::Q, 3)).unwrap();
        let dd = mc.dual().dual();
        assert_eq!(dd.dim(), mc.dim());
        assert_eq!(dd.actions(), mc.actions());
    }

    #[test]
    fn top_of_regular_is_simple() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let top = reg.top().unwrap();
        assert_eq!(top.module.dim(), 1); // local algebra
    }

    #[test]
    fn projective_cover_of_mc() {
        let a = liu_schulz_r2();
        let mc = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        let cover = projective_cover(&mc).unwrap();
        assert_eq!(cover.map.source.dim(), 8); // P(M_c) = A
        let ker = cover.map.kernel();
        assert_eq!(ker.module.dim(), 4);
        // kernel inside rad P
        let radp = cover.map.source.radical_submodule().unwrap();
        let mut span = RowSpan::new(Field::Q, cover.map.source.dim());
        for i in 0..radp.inclusion.rows() {
            span.insert(radp.inclusion.row_slice(i));
        }
        for i in 0..ker.inclusion.rows() {
            assert!(span.contains(ker.inclusion.row_slice(i)));
        }
    }

    #[test]
    fn cover_of_projective_is_identity() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let cover = projective_cover(&reg).unwrap();
        assert_eq!(cover.map.source.dim(), reg.dim());
        assert!(is_projective(&reg).unwrap());
    }

    #[test]
    fn syzygy_of_projective_vanishes() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        assert_eq!(syzygy(&reg, 1).unwrap().dim(), 0);
        assert_eq!(syzygy(&reg, 0).unwrap().dim(), 0); // stripping convention
    }

    #[test]
    fn selfinjectivity() {
        let a = liu_schulz_r2();
        assert!(is_selfinjective(&a).unwrap());
        // A_2 path algebra: upper triangular 2x2 matrices
        let f = Field::Q;
        // basis e1, e2, alpha with e1 alpha = alpha, alpha e2 = alpha
        let l0 = Matrix::from_int_rows(f, &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        let l1 = Matrix::from_int_rows(f, &[&[0, 0, 0], &[0, 1, 0], &[0, 0, 0]]);
        let l2 = Matrix::from_int_rows(f, &[&[0, 0, 0], &[0, 0, 1], &[0, 0, 0]]);
        let a2 = Arc::new(Algebra::new(
            f,
            vec![l0, l1, l2],
            vec![
                Scalar::one(f),
                Scalar::one(f),
                Scalar::zero(f),
            ],
            Some(vec!["e1".into(), "e2".into(), "a".into()]),
        ));
        assert!(a2.check().is_ok());
        assert!(!is_selfinjective(&a2).unwrap());
    }

    #[test]
    fn mc_is_neither_projective_nor_injective() {
        let a = liu_schulz_r2();
        let mc = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        assert!(!is_projective(&mc).unwrap());
        assert!(!is_injective(&mc).unwrap());
        let zero = Module::zero_module(&a);
        assert!(is_projective(&zero).unwrap());
        assert!(is_injective(&zero).unwrap());
    }

    #[test]
    fn iso_test_self() {
        let a = liu_schulz_r2();
        let mc = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        assert!(isomorphism_test(&mc, &mc).unwrap().is_iso());
    }

    #[test]
    fn iso_test_m1_vs_m3() {
        let a = liu_schulz_r2();
        let m1 = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        let m3 = families::module_mc(&a, &Scalar::from_int(Field::Q, 3)).unwrap();
        match isomorphism_test(&m1, &m3).unwrap() {
            IsoCertificate::NonIso(_) => {}
            other => panic!("expected NonIso, got {other:?}"),
        }
    }

    #[test]
    fn mc_is_indecomposable() {
        let a = liu_schulz_r2();
        let mc = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        assert!(is_indecomposable(&mc).unwrap());
        let reg = Module::regular(&a);
        let ds = Module::direct_sum(&[&reg, &reg]).unwrap();
        assert!(!is_indecomposable(&ds.module).unwrap());
    }

    #[test]
    fn socle_of_mc_is_simple() {
        let a = liu_schulz_r2();
        let mc = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        assert_eq!(mc.socle().unwrap().module.dim(), 1);
    }
}
