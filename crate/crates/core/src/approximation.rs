//! Minimal right add(M)-approximations, add(M)-resolution dimension and the
//! SGC extension End(A + D(A)).

use crate::endo::{end_algebra, EndoContext};
use crate::error::EngineError;
use crate::homological::{coregular, DimensionValue};
use crate::matrix::{Matrix, RowSolver};
use crate::module::{
    endomorphism_algebra, hom_space, is_generator, HomSpace, Module, ModuleMap,
};
use crate::scalar::Scalar;

/// An indecomposable direct summand of a module, with a splitting.
pub struct Summand {
    pub module: Module,
    /// dim(summand) x dim(ambient); inclusion followed by projection is the
    /// identity of the summand.
    pub inclusion: Matrix,
    pub projection: Matrix,
}

/// Decompose a module into indecomposable summands via the primitive
/// idempotents of its endomorphism algebra. Order is deterministic (the
/// idempotent order of the endomorphism algebra).
pub fn decompose(m: &Module) -> Result<Vec<Summand>, EngineError> {
    if m.dim() == 0 {
        return Ok(Vec::new());
    }
    let hs = hom_space(m, m)?;
    let end = endomorphism_algebra(m)?;
    let idems = end.primitive_idempotents()?;
    let mut out = Vec::with_capacity(idems.len());
    for e in &idems {
        let mut e_mat = Matrix::zero(m.field(), m.dim(), m.dim());
        for (k, c) in e.iter().enumerate() {
            if !c.is_zero() {
                e_mat = e_mat.add(&hs.basis[k].scale(c));
            }
        }
        let sub = m.submodule_spanned(&e_mat);
        let solver = RowSolver::new(&sub.inclusion);
        let rows: Vec<Vec<Scalar>> = (0..m.dim())
            .map(|i| {
                solver
                    .coordinates(&e_mat.row(i))
                    .expect("idempotent image is its own span")
            })
            .collect();
        let projection = Matrix::from_rows(m.field(), rows);
        out.push(Summand {
            module: sub.module,
            inclusion: sub.inclusion,
            projection,
        });
    }
    Ok(out)
}

/// A minimal right add(M)-approximation M_0 -> n with its kernel.
pub struct ApproximationStep {
    /// The approximating module, an explicit direct sum of summands of M.
    pub source: Module,
    pub map: ModuleMap,
    pub kernel: Module,
    /// (index into decompose(M), multiplicity) for the chosen summands.
    pub multiplicities: Vec<(usize, usize)>,
}

impl ApproximationStep {
    pub fn is_isomorphism(&self) -> bool {
        self.map.is_injective_map() && self.map.is_surjective()
    }
}

/// Construct the minimal right add(M)-approximation of n: the universal map
/// assembled from hom-space bases of the indecomposable summands of M,
/// trimmed greedily (descending summand dimension, then index) while
/// Hom(M, -) stays surjective. Krull-Schmidt makes the trimmed map right
/// minimal.
pub fn minimal_right_approximation(
    m_generator: &Module,
    n: &Module,
) -> Result<ApproximationStep, EngineError> {
    if !is_generator(m_generator)? {
        return Err(EngineError::NotGenerator);
    }
    let field = n.field();
    if n.dim() == 0 {
        let zero = Module::zero_module(n.algebra());
        let map = ModuleMap::new(zero.clone(), n.clone(), Matrix::zero(field, 0, 0));
        return Ok(ApproximationStep {
            source: zero.clone(),
            map,
            kernel: zero,
            multiplicities: Vec::new(),
        });
    }
    let summands = decompose(m_generator)?;
    let target_rank = hom_space(m_generator, n)?.dim();
    // candidate copies: (summand index, component map, surjectivity rows)
    struct Candidate {
        summand: usize,
        component: Matrix,
        rows: Vec<Vec<Scalar>>,
    }
    let mut candidates: Vec<Candidate> = Vec::new();
    for (si, s) in summands.iter().enumerate() {
        let comp_basis = hom_space(&s.module, n)?;
        if comp_basis.dim() == 0 {
            continue;
        }
        // Hom(M, s): precomposition rows for the surjectivity audit
        let hom_ms = hom_space(m_generator, &s.module)?;
        for f in &comp_basis.basis {
            let rows = hom_ms
                .basis
                .iter()
                .map(|g| HomSpace::flatten(&g.mul(f)))
                .collect();
            candidates.push(Candidate {
                summand: si,
                component: f.clone(),
                rows,
            });
        }
    }
    let surjective = |kept: &[bool]| -> bool {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (c, keep) in candidates.iter().zip(kept) {
            if *keep {
                rows.extend(c.rows.iter().cloned());
            }
        }
        if rows.is_empty() {
            return target_rank == 0;
        }
        Matrix::from_rows(field, rows).rank() == target_rank
    };
    let mut kept = vec![true; candidates.len()];
    assert!(
        surjective(&kept),
        "universal map must induce a surjection on Hom(M, -)"
    );
    // greedy trim: biggest summands first, then candidate index
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        let da = summands[candidates[a].summand].module.dim();
        let db = summands[candidates[b].summand].module.dim();
        db.cmp(&da).then(a.cmp(&b))
    });
    loop {
        let mut removed = false;
        for &i in &order {
            if !kept[i] {
                continue;
            }
            kept[i] = false;
            if surjective(&kept) {
                removed = true;
            } else {
                kept[i] = true;
            }
        }
        if !removed {
            break;
        }
    }
    // assemble the trimmed map
    let chosen: Vec<usize> = (0..candidates.len()).filter(|&i| kept[i]).collect();
    let mut multiplicities: Vec<(usize, usize)> = Vec::new();
    for &i in &chosen {
        let si = candidates[i].summand;
        match multiplicities.iter_mut().find(|(s, _)| *s == si) {
            Some((_, c)) => *c += 1,
            None => multiplicities.push((si, 1)),
        }
    }
    let parts: Vec<&Module> = chosen.iter().map(|&i| &summands[candidates[i].summand].module).collect();
    if parts.is_empty() {
        // n has no maps from add(M) other than zero; impossible for a
        // generator with n != 0, but keep the shape total
        let zero = Module::zero_module(n.algebra());
        let map = ModuleMap::new(zero.clone(), n.clone(), Matrix::zero(field, 0, n.dim()));
        return Ok(ApproximationStep {
            source: zero.clone(),
            map,
            kernel: zero,
            multiplicities,
        });
    }
    let ds = Module::direct_sum(&parts)?;
    let mut matrix: Option<Matrix> = None;
    for &i in &chosen {
        let block = candidates[i].component.clone();
        matrix = Some(match matrix {
            None => block,
            Some(m0) => m0.vstack(&block),
        });
    }
    let map = ModuleMap::new(ds.module.clone(), n.clone(), matrix.unwrap());
    assert!(
        map.is_surjective(),
        "minimal approximation from a generator is surjective"
    );
    let kernel = map.kernel().module;
    Ok(ApproximationStep {
        source: ds.module,
        map,
        kernel,
        multiplicities,
    })
}

/// Iterate minimal approximations on kernels; Exact(k) when the k-th
/// approximation is an isomorphism (i.e. the module reached add(M)).
pub fn add_resolution_dimension(
    n: &Module,
    m_generator: &Module,
    maxlen: usize,
) -> Result<DimensionValue, EngineError> {
    let mut current = n.clone();
    for k in 0..=maxlen {
        let step = minimal_right_approximation(m_generator, &current)?;
        if step.is_isomorphism() {
            return Ok(DimensionValue::Exact(k));
        }
        current = step.kernel;
    }
    Ok(DimensionValue::AtLeast(maxlen + 1))
}

/// The SGC extension End_A(A + D(A)).
pub fn sgc_extension(algebra: &crate::algebra::AlgebraRef) -> Result<EndoContext, EngineError> {
    let reg = Module::regular(algebra);
    let da = coregular(algebra);
    end_algebra(&[reg, da])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::module::{is_projective, projective_cover};
    use crate::scalar::Field;
    use std::sync::Arc;

    fn liu_schulz_r2() -> crate::algebra::AlgebraRef {
        families::liu_schulz_ref(Field::Q, &Scalar::from_int(Field::Q, 2)).unwrap()
    }

    #[test]
    fn decompose_direct_sum() {
        let a = liu_schulz_r2();
        let m1 = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        let reg = Module::regular(&a);
        let ds = Module::direct_sum(&[&reg, &m1]).unwrap();
        let parts = decompose(&ds.module).unwrap();
        assert_eq!(parts.len(), 2);
        let mut dims: Vec<usize> = parts.iter().map(|p| p.module.dim()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![4, 8]);
        for p in &parts {
            // inclusion then projection is the identity of the summand
            assert_eq!(
                p.inclusion.mul(&p.projection),
                Matrix::identity(Field::Q, p.module.dim())
            );
        }
    }

    #[test]
    fn approximation_by_regular_is_projective_cover() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let m1 = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        let step = minimal_right_approximation(&reg, &m1).unwrap();
        let cover = projective_cover(&m1).unwrap();
        assert_eq!(step.source.dim(), cover.map.source.dim());
        assert_eq!(step.kernel.dim(), cover.map.kernel().module.dim());
    }

    #[test]
    fn approximation_of_member_is_identity() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let m1 = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        let ds = Module::direct_sum(&[&reg, &m1]).unwrap();
        let step = minimal_right_approximation(&ds.module, &m1).unwrap();
        assert!(step.is_isomorphism());
        assert_eq!(step.source.dim(), 4);
    }

    #[test]
    fn non_generator_rejected() {
        let a = liu_schulz_r2();
        let m1 = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        assert!(matches!(
            minimal_right_approximation(&m1, &m1),
            Err(EngineError::NotGenerator)
        ));
    }

    #[test]
    fn add_resolution_dimension_basics() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let m1 = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        // member of add(M)
        let ds = Module::direct_sum(&[&reg, &m1]).unwrap();
        assert_eq!(
            add_resolution_dimension(&m1, &ds.module, 3).unwrap(),
            DimensionValue::Exact(0)
        );
        // add(A)-resolution dimension = projective dimension: infinite over
        // a selfinjective algebra for non-projective modules
        assert_eq!(
            add_resolution_dimension(&m1, &reg, 3).unwrap(),
            DimensionValue::AtLeast(4)
        );
        assert_eq!(
            add_resolution_dimension(&reg, &reg, 3).unwrap(),
            DimensionValue::Exact(0)
        );
    }

    #[test]
    fn sgc_of_symmetric_algebra() {
        let a = liu_schulz_r2();
        let ctx = sgc_extension(&a).unwrap();
        // D(A) is isomorphic to A for a symmetric algebra, so End(A + D(A))
        // has dimension 4 * dim A
        assert_eq!(ctx.b.dim(), 32);
        assert!(ctx.b.check().is_ok());
    }

    #[test]
    fn is_generator_detects() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let m1 = families::module_mc(&a, &Scalar::from_int(Field::Q, 1)).unwrap();
        assert!(is_generator(&reg).unwrap());
        assert!(!is_generator(&m1).unwrap());
        let ds = Module::direct_sum(&[&reg, &m1]).unwrap();
        assert!(is_generator(&ds.module).unwrap());
        let _ = Arc::clone(&a);
        assert!(is_projective(&reg).unwrap());
    }
}
