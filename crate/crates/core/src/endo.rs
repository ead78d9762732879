//! Endomorphism algebras of generators, the Hom(N, -) functor, the Mueller
//! and codominant-dimension cross-checks, and the nearly-Gorenstein
//! refutation pipeline.
//!
//! Convention: the endomorphism algebra B = End(N) multiplies by function
//! composition, b * b' = b o b' (apply b' first). Under the row-vector
//! matrix convention this means mat(b * b') = mat(b') * mat(b), which is
//! exactly what makes Hom(N, -) a functor into right B-modules.

use std::sync::Arc;

use crate::algebra::{unit_vector, Algebra, AlgebraRef};
use crate::error::EngineError;
use crate::homological::{
    codominant_dimension, coregular, dominant_dimension, ext_vanishing_from,
    finitistic_codominant_witness, is_costable, is_gorenstein_injective, DimensionValue,
    ExtCalculator, GorensteinVerdict, TailVerdict,
};
use crate::matrix::{Matrix, RowSolver};
use crate::module::{
    hom_space, is_generator, is_indecomposable, is_projective, is_selfinjective,
    isomorphism_test, syzygy, cosyzygy, HomSpace, IsoCertificate, Module,
};
use crate::scalar::Scalar;

/// End(N) for a decomposed module N, with the data realizing Hom(N, -).
pub struct EndoContext {
    pub base: AlgebraRef,
    pub summands: Vec<Module>,
    /// The direct sum of the summands.
    pub n: Module,
    /// B = End(N) with the blockwise hom basis.
    pub b: AlgebraRef,
    /// Endomorphism matrices of N matching B's basis order.
    pub basis_maps: Vec<Matrix>,
    /// (source summand, target summand) per basis index.
    pub blocks: Vec<(usize, usize)>,
    /// Identity of each summand, as an element of B; primitive when the
    /// summand is indecomposable.
    pub idempotents: Vec<Vec<Scalar>>,
    /// Base is symmetric and N is a generator.
    pub gendo_symmetric: bool,
}

/// Build End(N) from an explicit summand decomposition. The basis of B is
/// the concatenation of hom-space bases Hom(N_i, N_j), so the summand
/// identities are idempotents of B by construction.
pub fn end_algebra(summands: &[Module]) -> Result<EndoContext, EngineError> {
    let parts: Vec<&Module> = summands.iter().collect();
    let ds = Module::direct_sum(&parts)?;
    let n = ds.module.clone();
    let field = n.field();
    let total = n.dim();
    let mut basis_maps: Vec<Matrix> = Vec::new();
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    for i in 0..summands.len() {
        for j in 0..summands.len() {
            let hs = hom_space(&summands[i], &summands[j])?;
            for (k, f) in hs.basis.iter().enumerate() {
                let lifted = ds.projections[i].mul(f).mul(&ds.injections[j]);
                basis_maps.push(lifted);
                blocks.push((i, j));
                labels.push(format!("h{i}_{j}_{k}"));
            }
        }
    }
    let d = basis_maps.len();
    if d == 0 {
        return Err(EngineError::EmptySum);
    }
    let flat_rows: Vec<Vec<Scalar>> = basis_maps.iter().map(HomSpace::flatten).collect();
    let flat = Matrix::from_rows(field, flat_rows);
    if flat.rank() != d {
        return Err(EngineError::Precondition(
            "blockwise hom bases are dependent".into(),
        ));
    }
    let solver = RowSolver::new(&flat);
    let coords_of = |m: &Matrix| -> Vec<Scalar> {
        solver
            .coordinates(&HomSpace::flatten(m))
            .expect("endomorphism lies in the blockwise hom basis span")
    };
    let mut left_mult = Vec::with_capacity(d);
    for i in 0..d {
        let rows = (0..d)
            .map(|j| coords_of(&basis_maps[j].mul(&basis_maps[i])))
            .collect();
        left_mult.push(Matrix::from_rows(field, rows));
    }
    let unit = coords_of(&Matrix::identity(field, total));
    let b = Arc::new(Algebra::new(field, left_mult, unit, Some(labels)));
    let idempotents = (0..summands.len())
        .map(|i| coords_of(&ds.projections[i].mul(&ds.injections[i])))
        .collect();
    let gendo_symmetric =
        summands[0].algebra().symmetrizing_form().is_found() && is_generator(&n)?;
    Ok(EndoContext {
        base: Arc::clone(summands[0].algebra()),
        summands: summands.to_vec(),
        n,
        b,
        basis_maps,
        blocks,
        idempotents,
        gendo_symmetric,
    })
}

impl EndoContext {
    /// Hom(N, x) as a right B-module: b acts by precomposition with the
    /// endomorphism b of N.
    pub fn hom_functor_module(&self, x: &Module) -> Result<Module, EngineError> {
        let hs = hom_space(&self.n, x)?;
        if hs.dim() == 0 {
            return Ok(Module::zero_module(&self.b));
        }
        let field = x.field();
        let solver = RowSolver::new(&hs.basis_rows());
        let actions = self
            .basis_maps
            .iter()
            .map(|e| {
                let rows = hs
                    .basis
                    .iter()
                    .map(|phi| {
                        solver
                            .coordinates(&HomSpace::flatten(&e.mul(phi)))
                            .expect("precomposition stays in Hom(N, x)")
                    })
                    .collect();
                Matrix::from_rows(field, rows)
            })
            .collect();
        Ok(Module::new(Arc::clone(&self.b), actions))
    }
}

/// Compatibility of two truncated dimension answers: exact values must
/// match; a bounded answer is compatible with anything at or above it.
pub fn dimensions_agree(a: &DimensionValue, b: &DimensionValue) -> bool {
    match (a, b) {
        (DimensionValue::Exact(x), DimensionValue::Exact(y)) => x == y,
        (DimensionValue::AtLeast(_), DimensionValue::AtLeast(_)) => true,
        (DimensionValue::Exact(x), DimensionValue::AtLeast(y))
        | (DimensionValue::AtLeast(y), DimensionValue::Exact(x)) => x >= y,
    }
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    /// Dimension computed directly from the (co)resolution over B.
    pub direct: DimensionValue,
    /// Dimension from the Ext formula over the base algebra.
    pub formula: DimensionValue,
    pub agree: bool,
    pub bound: usize,
}

/// Mueller's theorem: domdim_B Hom(N, x) = inf { i >= 1 | Ext^i(N, x) != 0 } + 1.
pub fn mueller_crosscheck(
    ctx: &EndoContext,
    x: &Module,
    bound: usize,
) -> Result<CrosscheckReport, EngineError> {
    let y = ctx.hom_functor_module(x)?;
    let direct = dominant_dimension(&y, bound)?;
    let formula = match ext_vanishing_from(&ctx.n, x, 1, bound)? {
        TailVerdict::FirstNonzero(i) => DimensionValue::Exact(i + 1),
        TailVerdict::VanishesUpTo(_) => DimensionValue::AtLeast(bound + 1),
    };
    Ok(CrosscheckReport {
        agree: dimensions_agree(&direct, &formula),
        direct,
        formula,
        bound,
    })
}

/// Codominant dimension formula over a selfinjective base:
/// codomdim_B Hom(N, x) = inf { i >= 1 | Ext^1(N, Omega^i(x)) != 0 } - 1.
pub fn codomdim_crosscheck(
    ctx: &EndoContext,
    x: &Module,
    bound: usize,
) -> Result<CrosscheckReport, EngineError> {
    if !is_selfinjective(&ctx.base)? {
        return Err(EngineError::Precondition(
            "codominant-dimension formula needs a selfinjective base".into(),
        ));
    }
    let y = ctx.hom_functor_module(x)?;
    let direct = codominant_dimension(&y, bound)?;
    let mut calc = ExtCalculator::new(&ctx.n)?;
    let mut formula = DimensionValue::AtLeast(bound + 1);
    let mut current = x.clone();
    for i in 1..=bound + 1 {
        current = syzygy(&current, 1)?;
        if calc.ext_dim(&current, 1)? != 0 {
            formula = DimensionValue::Exact(i - 1);
            break;
        }
    }
    Ok(CrosscheckReport {
        agree: dimensions_agree(&direct, &formula),
        direct,
        formula,
        bound,
    })
}

/// Hom_B(D(B), y) as a right B-module; the action comes from the left
/// B-structure of the bimodule D(B).
pub fn hom_from_coregular(b: &AlgebraRef, y: &Module) -> Result<Module, EngineError> {
    let db = coregular(b);
    let hs = hom_space(&db, y)?;
    if hs.dim() == 0 {
        return Ok(Module::zero_module(b));
    }
    let field = y.field();
    let solver = RowSolver::new(&hs.basis_rows());
    let actions = (0..b.dim())
        .map(|t| {
            let rt = b
                .right_mult_matrix(&unit_vector(field, b.dim(), t))
                .transpose();
            let rows = hs
                .basis
                .iter()
                .map(|phi| {
                    solver
                        .coordinates(&HomSpace::flatten(&rt.mul(phi)))
                        .expect("left action stays in Hom(D(B), y)")
                })
                .collect();
            Matrix::from_rows(field, rows)
        })
        .collect();
    Ok(Module::new(Arc::clone(b), actions))
}

#[derive(Debug, Clone)]
pub struct GendoReport {
    pub domdim: DimensionValue,
    pub iso: IsoCertificate,
    /// (domdim >= 2) coincides with the isomorphism verdict.
    pub consistent: bool,
    /// The Ext formula value, when domdim >= 2 is established.
    pub formula: Option<DimensionValue>,
    pub formula_agrees: Option<bool>,
    pub bound: usize,
}

/// Gendo-symmetric characterization: domdim(y) >= 2 iff y = Hom_B(D(B), y),
/// and in that case domdim(y) = inf { i >= 1 | Ext^i(D(B), y) != 0 } + 1.
pub fn gendo_domdim_crosscheck(
    ctx: &EndoContext,
    y: &Module,
    bound: usize,
) -> Result<GendoReport, EngineError> {
    if !ctx.gendo_symmetric {
        return Err(EngineError::Precondition(
            "crosscheck needs a gendo-symmetric context".into(),
        ));
    }
    let hdy = hom_from_coregular(&ctx.b, y)?;
    let iso = isomorphism_test(y, &hdy)?;
    let domdim = dominant_dimension(y, bound)?;
    let ge2 = domdim.lower_bound() >= 2;
    let consistent = ge2 == iso.is_iso();
    let (formula, formula_agrees) = if ge2 {
        let db = coregular(&ctx.b);
        let f = match ext_vanishing_from(&db, y, 1, bound)? {
            TailVerdict::FirstNonzero(i) => DimensionValue::Exact(i + 1),
            TailVerdict::VanishesUpTo(_) => DimensionValue::AtLeast(bound + 1),
        };
        let agrees = dimensions_agree(&domdim, &f);
        (Some(f), Some(agrees))
    } else {
        (None, None)
    };
    Ok(GendoReport {
        domdim,
        iso,
        consistent,
        formula,
        formula_agrees,
        bound,
    })
}

/// How the (m, l) hypothesis of the refutation pipeline is supplied.
pub enum SpecialInput<'a> {
    /// Caller supplies the module m and the index l.
    Given { m: &'a Module, l: usize },
    /// Scan the summands of x for a pair (m, l) satisfying the hypothesis.
    Scan,
}

/// The full certificate bundle of the refutation pipeline.
pub struct WitnessBundle {
    pub ctx: EndoContext,
    pub l: usize,
    pub m: Module,
    /// R = Hom(A + x, Omega^{-l}(m)) over B.
    pub r: Module,
    pub domdim_r: DimensionValue,
    /// Closed-form criterion upgrading the bounded domdim answer, when the
    /// caller supplied one.
    pub criterion: Option<String>,
    pub codomdim_r: DimensionValue,
    pub costable: TailVerdict,
    pub gorenstein_injective: GorensteinVerdict,
    /// Codominant dimensions of Omega^{-i}(R), i = 1..depth.
    pub cosyzygy_codomdims: Vec<DimensionValue>,
    /// D(R) over B-opposite is stable but not Gorenstein projective.
    pub dual_stable_not_gp: bool,
    pub bound: usize,
}

impl WitnessBundle {
    pub fn to_json(&self) -> serde_json::Value {
        let costable = match self.costable {
            TailVerdict::VanishesUpTo(h) => format!("costable up to {h}"),
            TailVerdict::FirstNonzero(i) => format!("not costable: Ext^{i}(D(B), R) != 0"),
        };
        let not_gi = self
            .gorenstein_injective
            .negative_certificate
            .clone()
            .or_else(|| self.gorenstein_injective.failing.clone())
            .unwrap_or_else(|| "no refutation found".into());
        serde_json::json!({
            "base_algebra": crate::io::algebra_to_json(&self.ctx.base),
            "generator_summands": self.ctx.summands.iter().map(Module::dim).collect::<Vec<_>>(),
            "l": self.l,
            "m_dim": self.m.dim(),
            "R": serde_json::to_value(crate::io::ModuleJson::from_module(&self.r)).expect("module serializes"),
            "certificates": {
                "domdim": self.domdim_r.to_json(self.bound, self.criterion.as_deref()),
                "codomdim": self.codomdim_r.to_json(self.bound, None),
                "costable_up_to": costable,
                "not_GI_reason": not_gi,
                "cosyzygy_codomdims": self.cosyzygy_codomdims.iter().map(|d| d.to_json(self.bound, None)).collect::<Vec<_>>(),
                "dual_stable_not_GP": self.dual_stable_not_gp,
            },
        })
    }
}

/// Theorem-2.3-style refutation: build B = End(A + x) and the module
/// R = Hom(A + x, Omega^{-l}(m)), and emit machine-checkable certificates
/// that R is costable but not Gorenstein injective, with codominant
/// dimension zero and cosyzygies of codominant dimension 1..depth.
pub fn refute_nearly_gorenstein(
    a: &AlgebraRef,
    x_summands: &[Module],
    input: SpecialInput<'_>,
    bound: usize,
    depth: usize,
    criterion: Option<String>,
) -> Result<WitnessBundle, EngineError> {
    if !a.symmetrizing_form().is_found() {
        return Err(EngineError::Precondition(
            "refutation pipeline needs a symmetric base algebra".into(),
        ));
    }
    if x_summands.is_empty() {
        return Err(EngineError::EmptySum);
    }
    for xs in x_summands {
        if xs.dim() == 0 || is_projective(xs)? || !is_indecomposable(xs)? {
            return Err(EngineError::Precondition(
                "x must be a sum of indecomposable non-projective modules".into(),
            ));
        }
    }
    let x_refs: Vec<&Module> = x_summands.iter().collect();
    let x = Module::direct_sum(&x_refs)?.module;
    let mut calc = ExtCalculator::new(&x)?;
    let (m, l) = match input {
        SpecialInput::Given { m, l } => {
            if l < 1 || calc.ext_dim(m, l)? == 0 {
                return Err(EngineError::ScanFailed(format!(
                    "Ext^{l}(x, m) must be nonzero"
                )));
            }
            for i in l + 1..=bound {
                if calc.ext_dim(m, i)? != 0 {
                    return Err(EngineError::ScanFailed(format!(
                        "Ext^{i}(x, m) != 0 above l = {l}"
                    )));
                }
            }
            (m.clone(), l)
        }
        SpecialInput::Scan => {
            let mut found = None;
            'outer: for cand in x_summands {
                let mut last_nonzero = None;
                for i in 1..=bound {
                    if calc.ext_dim(cand, i)? != 0 {
                        last_nonzero = Some(i);
                    }
                }
                if let Some(l) = last_nonzero {
                    if l < bound {
                        found = Some((cand.clone(), l));
                        break 'outer;
                    }
                }
            }
            found.ok_or_else(|| {
                EngineError::ScanFailed(
                    "no summand m with Ext^l(x, m) != 0 and a vanishing tail".into(),
                )
            })?
        }
    };
    let reg = Module::regular(a);
    let mut n_summands = vec![reg];
    n_summands.extend(x_summands.iter().cloned());
    let ctx = end_algebra(&n_summands)?;
    let omega_ml = cosyzygy(&m, l)?;
    let r = ctx.hom_functor_module(&omega_ml)?;
    let domdim_r = dominant_dimension(&r, bound)?;
    let codomdim_r = codominant_dimension(&r, bound)?;
    let costable = is_costable(&r, bound)?;
    let gorenstein_injective = is_gorenstein_injective(&r, bound)?;
    let cosyzygy_codomdims = if depth == 0 {
        Vec::new()
    } else {
        finitistic_codominant_witness(&r, depth, bound)?
            .into_iter()
            .map(|(_, d)| d)
            .collect()
    };
    let dual_stable_not_gp =
        costable.vanishes() && !gorenstein_injective.holds_up_to_bound;
    Ok(WitnessBundle {
        ctx,
        l,
        m,
        r,
        domdim_r,
        criterion,
        codomdim_r,
        costable,
        gorenstein_injective,
        cosyzygy_codomdims,
        dual_stable_not_gp,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::scalar::Field;

    fn liu_schulz_r2() -> AlgebraRef {
        families::liu_schulz_ref(Field::Q, &Scalar::from_int(Field::Q, 2)).unwrap()
    }

    fn mc(a: &AlgebraRef, num: i64, den: i64) -> Module {
        families::module_mc(a, &Scalar::from_ratio(Field::Q, num, den).unwrap()).unwrap()
    }

    fn ctx_a_m1(a: &AlgebraRef) -> EndoContext {
        let reg = Module::regular(a);
        let m1 = mc(a, 1, 1);
        end_algebra(&[reg, m1]).unwrap()
    }

    #[test]
    fn end_of_a_plus_m1_has_dim_19() {
        let a = liu_schulz_r2();
        let ctx = ctx_a_m1(&a);
        // 8 (End A) + 4 (Hom(A, M1)) + 4 (Hom(M1, A)) + 3 (End M1)
        assert_eq!(ctx.b.dim(), 19);
        assert!(ctx.b.check().is_ok());
        assert!(ctx.gendo_symmetric);
        assert_eq!(ctx.idempotents.len(), 2);
        assert_eq!(ctx.b.primitive_idempotents().unwrap().len(), 2);
    }

    #[test]
    fn end_of_regular_is_the_algebra() {
        let a = liu_schulz_r2();
        let reg = Module::regular(&a);
        let ctx = end_algebra(&[reg]).unwrap();
        assert_eq!(ctx.b.dim(), 8);
        assert!(ctx.b.check().is_ok());
    }

    #[test]
    fn yoneda_regular_module() {
        let a = liu_schulz_r2();
        let ctx = ctx_a_m1(&a);
        let y = ctx.hom_functor_module(&ctx.n).unwrap();
        assert_eq!(y.dim(), ctx.b.dim());
        let reg_b = Module::regular(&ctx.b);
        assert!(isomorphism_test(&y, &reg_b).unwrap().is_iso());
    }

    #[test]
    fn hom_functor_of_a_is_projective_injective() {
        let a = liu_schulz_r2();
        let ctx = ctx_a_m1(&a);
        let reg = Module::regular(&a);
        let y = ctx.hom_functor_module(&reg).unwrap();
        assert_eq!(y.dim(), 12);
        assert!(crate::module::is_projective(&y).unwrap());
        assert!(crate::module::is_injective(&y).unwrap());
    }

    #[test]
    fn hom_functor_dimension_formula() {
        let a = liu_schulz_r2();
        let ctx = ctx_a_m1(&a);
        // dim Hom(N, M_{1/2}) = 4 + 2
        let mhalf = mc(&a, 1, 2);
        let y = ctx.hom_functor_module(&mhalf).unwrap();
        assert_eq!(y.dim(), 6);
    }

    #[test]
    fn mueller_on_the_generator() {
        let a = liu_schulz_r2();
        let ctx = ctx_a_m1(&a);
        let report = mueller_crosscheck(&ctx, &ctx.n, 6).unwrap();
        assert_eq!(report.direct, DimensionValue::Exact(2));
        assert_eq!(report.formula, DimensionValue::Exact(2));
        assert!(report.agree);
    }

    #[test]
    fn mueller_on_the_regular_module() {
        let a = liu_schulz_r2();
        let ctx = ctx_a_m1(&a);
        let reg = Module::regular(&a);
        let report = mueller_crosscheck(&ctx, &reg, 4).unwrap();
        assert_eq!(report.direct, DimensionValue::AtLeast(5));
        assert_eq!(report.formula, DimensionValue::AtLeast(5));
        assert!(report.agree);
    }

    #[test]
    fn codomdim_crosscheck_on_cosyzygy() {
        let a = liu_schulz_r2();
        let ctx = ctx_a_m1(&a);
        let m1 = mc(&a, 1, 1);
        let om = cosyzygy(&m1, 1).unwrap();
        let report = codomdim_crosscheck(&ctx, &om, 5).unwrap();
        assert_eq!(report.direct, DimensionValue::Exact(0));
        assert_eq!(report.formula, DimensionValue::Exact(0));
    }

    #[test]
    fn witness_bundle_for_m1() {
        let a = liu_schulz_r2();
        let m1 = mc(&a, 1, 1);
        let bundle = refute_nearly_gorenstein(
            &a,
            &[m1.clone()],
            SpecialInput::Given { m: &m1, l: 1 },
            6,
            2,
            None,
        )
        .unwrap();
        assert_eq!(bundle.r.dim(), 6);
        assert_eq!(bundle.domdim_r, DimensionValue::AtLeast(7));
        assert_eq!(bundle.codomdim_r, DimensionValue::Exact(0));
        assert!(bundle.costable.vanishes());
        assert!(!bundle.gorenstein_injective.holds_up_to_bound);
        assert!(bundle.gorenstein_injective.negative_certificate.is_some());
        assert_eq!(
            bundle.cosyzygy_codomdims,
            vec![DimensionValue::Exact(1), DimensionValue::Exact(2)]
        );
        assert!(bundle.dual_stable_not_gp);
        let j = bundle.to_json();
        assert_eq!(j["certificates"]["codomdim"]["value"], 0);
    }
}
