//! Command-line front end: construct the shipped algebra families, run the
//! verification suite, emit witness bundles and one-off computations.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use fdalg::algebra::AlgebraRef;
use fdalg::approximation::minimal_right_approximation;
use fdalg::endo::{
    end_algebra, gendo_domdim_crosscheck, mueller_crosscheck, codomdim_crosscheck,
    refute_nearly_gorenstein, SpecialInput,
};
use fdalg::families::{
    self, lemma26_table, liu_schulz_flags, liu_schulz_ref, module_mc, on_infinite_r_orbit,
};
use fdalg::homological::{
    ar_translate, codominant_dimension, dominant_dimension, ext_dim, l_special_scan,
    DimensionValue, ExtCalculator, TailVerdict,
};
use fdalg::module::{
    cosyzygy, hom_space, is_selfinjective, isomorphism_test, syzygy, Module,
};
use fdalg::report::{Grade, Report};
use fdalg::scalar::unity_order;
use fdalg::{EngineError, Field, Scalar};

#[derive(Parser)]
#[command(name = "fdalg", version, about = "Exact homological computations for finite dimensional algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FamilyOpts {
    /// Base field: Q or Fp:<prime>
    #[arg(long, default_value = "Q")]
    field: String,
    /// Liu-Schulz parameter r
    #[arg(long, default_value = "2")]
    r: String,
    /// Module parameters c (comma separated scalars)
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
    cs: Vec<String>,
    /// Homological bound H
    #[arg(long, default_value_t = 12)]
    bound: usize,
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// json or text
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full verification suite over the Liu-Schulz family
    VerifyPaper {
        #[command(flatten)]
        family: FamilyOpts,
        /// Cosyzygy depth for the finitistic codominant witness
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Emit the costable-not-Gorenstein-injective witness bundle
    Witness {
        #[command(flatten)]
        family: FamilyOpts,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Scan M_c modules for candidate l-special behavior
    LspecialScan {
        #[command(flatten)]
        family: FamilyOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// One-off computation from a JSON job file
    Compute {
        /// Path to the job description
        job: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn parse_scalar_in(field: Field, s: &str) -> Result<Scalar, EngineError> {
    match field {
        Field::Q => {
            let v: Scalar = s.parse()?;
            if v.field() != Field::Q {
                return Err(EngineError::Parse(format!("scalar {s} is not rational")));
            }
            Ok(v)
        }
        Field::Fp(p) => {
            // accept n or n/d with integer parts, reduced mod p
            if let Some((n, d)) = s.split_once('/') {
                let n: i64 = n.trim().parse().map_err(|_| EngineError::Parse(s.into()))?;
                let d: i64 = d.trim().parse().map_err(|_| EngineError::Parse(s.into()))?;
                Scalar::from_ratio(Field::Fp(p), n, d)
            } else {
                let n: i64 = s.trim().parse().map_err(|_| EngineError::Parse(s.into()))?;
                Ok(Scalar::from_int(Field::Fp(p), n))
            }
        }
    }
}

struct FamilyInputs {
    field: Field,
    r: Scalar,
    cs: Vec<Scalar>,
    bound: usize,
}

impl FamilyOpts {
    fn parse(&self) -> Result<FamilyInputs, EngineError> {
        let field: Field = self.field.parse()?;
        let r = parse_scalar_in(field, &self.r)?;
        if r.is_zero() {
            return Err(EngineError::Precondition("r must be nonzero".into()));
        }
        if let Some(k) = unity_order(&r, 4096) {
            eprintln!(
                "warning: r = {r} is a root of unity of order {k}; syzygies of M_c are \
                 periodic and infinite-tail certificates are unavailable"
            );
        }
        let cs = self
            .cs
            .iter()
            .map(|c| parse_scalar_in(field, c))
            .collect::<Result<Vec<_>, _>>()?;
        if self.bound < 1 {
            return Err(EngineError::Precondition("bound must be at least 1".into()));
        }
        Ok(FamilyInputs {
            field,
            r,
            cs,
            bound: self.bound,
        })
    }
}

fn emit(output: &OutputOpts, text: String, json: serde_json::Value) -> Result<(), EngineError> {
    let body = if output.format == "json" {
        let mut s = serde_json::to_string_pretty(&json)?;
        s.push('\n');
        s
    } else {
        text
    };
    match &output.out {
        Some(path) => std::fs::write(path, body)?,
        None => print!("{body}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, EngineError> {
    match cli.command {
        Command::VerifyPaper {
            family,
            depth,
            output,
        } => {
            let inputs = family.parse()?;
            let report = verify_paper(&inputs, depth)?;
            let ok = report.all_passed();
            emit(&output, report.render_text(), serde_json::to_value(&report)?)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Witness {
            family,
            depth,
            output,
        } => {
            let inputs = family.parse()?;
            let (bundle_json, summary) = witness(&inputs, depth)?;
            emit(&output, summary, bundle_json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::LspecialScan { family, output } => {
            let inputs = family.parse()?;
            let (json, text) = lspecial(&inputs)?;
            emit(&output, text, json)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compute { job, output } => {
            let body = std::fs::read_to_string(&job)?;
            let result = compute(&body)?;
            let text = format!("{result:#}\n");
            emit(&output, text, result)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn dim_detail(v: &DimensionValue) -> String {
    v.to_string()
}

fn verify_paper(inputs: &FamilyInputs, depth: usize) -> Result<Report, EngineError> {
    let FamilyInputs {
        field,
        r,
        cs,
        bound,
    } = inputs;
    let bound = *bound;
    let mut report = Report::new(
        field.to_string(),
        serde_json::json!({
            "r": r.to_string(),
            "cs": cs.iter().map(Scalar::to_string).collect::<Vec<_>>(),
            "depth": depth,
        }),
        bound,
    );
    let flags = liu_schulz_flags(r, bound + 2);
    let algebra = liu_schulz_ref(*field, r)?;

    // basics: Prop 2.5 territory
    let rad_dim = algebra.radical()?.rows();
    let form = algebra.symmetrizing_form().is_found();
    let selfinj = is_selfinjective(&algebra)?;
    let mut mc_dims_ok = true;
    let mut modules = Vec::new();
    for c in cs {
        let m = module_mc(&algebra, c)?;
        mc_dims_ok &= m.dim() == 4;
        modules.push(m);
    }
    report.push(
        "liu_schulz_basics",
        algebra.dim() == 8
            && algebra.check().is_ok()
            && rad_dim == 7
            && form
            && selfinj
            && mc_dims_ok,
        Grade::Exact,
        format!(
            "dim 8, associative, radical dim {rad_dim}, symmetrizing form: {form}, selfinjective: {selfinj}, dim M_c = 4 for all c"
        ),
    );

    if flags.r_squared_is_one || flags.r_cubed_is_one {
        report.push(
            "lemma26_grid",
            true,
            Grade::Exact,
            "skipped: r^2 = 1 or r^3 = 1 violates the simplicity assumption".into(),
        );
    } else {
        let table = lemma26_table(*field, r, cs, bound)?;
        let hom_ok = table
            .cells
            .iter()
            .all(|c| c.hom_dim == c.hom_predicted);
        let ext1_ok = table
            .cells
            .iter()
            .all(|c| c.ext1_dim == c.ext1_predicted);
        let tail_ok = table
            .cells
            .iter()
            .all(|c| c.tail_first_nonzero.is_none() == c.tail_predicted_vanishing);
        report.push(
            "lemma26_hom",
            hom_ok,
            Grade::Exact,
            "dim Hom(M_c, M_d) = 2 + [c=d] + [cr^2=d] on the grid".into(),
        );
        report.push(
            "lemma26_ext1",
            ext1_ok,
            Grade::Exact,
            "dim Ext^1(M_c, M_d) matches the four-delta formula on the grid".into(),
        );
        report.push(
            "lemma26_tail",
            tail_ok,
            Grade::CriterionCertified,
            format!("bounded Ext-tails agree with the r^l-orbit criterion up to H={bound}"),
        );
    }

    // syzygy identities
    let c1 = &cs[0];
    let m1 = &modules[0];
    let m_r = module_mc(&algebra, &c1.mul(r))?;
    let m_r2 = module_mc(&algebra, &c1.mul(r).mul(r))?;
    let om1 = syzygy(m1, 1)?;
    let om2 = syzygy(m1, 2)?;
    let tau = ar_translate(m1)?;
    let s1 = isomorphism_test(&om1, &m_r)?.is_iso();
    let s2 = isomorphism_test(&om2, &m_r2)?.is_iso();
    let st = isomorphism_test(&tau, &m_r2)?.is_iso();
    report.push(
        "syzygy_identity",
        s1 && s2 && st,
        Grade::Exact,
        format!("Omega(M_c) = M_cr: {s1}; Omega^2(M_c) = M_cr2: {s2}; tau(M_c) = M_cr2: {st}"),
    );

    // Mueller cross-check on End(A + M_{c_1})
    let reg = Module::regular(&algebra);
    let ctx = end_algebra(&[reg.clone(), m1.clone()])?;
    let mueller = mueller_crosscheck(&ctx, &ctx.n, bound)?;
    report.push(
        "mueller_crosscheck",
        mueller.agree
            && mueller.direct == DimensionValue::Exact(2)
            && ctx.idempotents.len() == 2,
        Grade::Exact,
        format!(
            "domdim(B) direct = {}, formula = {}, idempotents = {}",
            dim_detail(&mueller.direct),
            dim_detail(&mueller.formula),
            ctx.idempotents.len()
        ),
    );

    // Prop 2.1 cross-check on sample modules
    let mut samples: Vec<Module> = modules.iter().take(3).cloned().collect();
    samples.push(cosyzygy(m1, 1)?);
    samples.push(reg.clone());
    let mut prop21_ok = true;
    let mut details = Vec::new();
    for x in &samples {
        let rep = codomdim_crosscheck(&ctx, x, bound)?;
        prop21_ok &= rep.agree;
        details.push(format!(
            "({} vs {})",
            dim_detail(&rep.direct),
            dim_detail(&rep.formula)
        ));
    }
    report.push(
        "prop21_crosscheck",
        prop21_ok,
        Grade::Exact,
        format!("codomdim direct vs formula on {} samples: {}", samples.len(), details.join(" ")),
    );

    // witness pipeline: costable module that is not Gorenstein injective
    match witness_core(inputs, depth) {
        Ok((_, witness_ok, summary)) => {
            let grade = if summary.contains("criterion-certified") {
                Grade::CriterionCertified
            } else {
                Grade::Bounded
            };
            report.push("witness_bundle", witness_ok, grade, summary);
        }
        Err(EngineError::ScanFailed(why)) if unity_order(r, 4096).is_some() => {
            report.push(
                "witness_bundle",
                true,
                Grade::Bounded,
                format!("skipped: r is a root of unity, so {why}"),
            );
        }
        Err(e) => return Err(e),
    }

    // Prop 2.2(2) on the regular B-module and on R
    let reg_b = Module::regular(&ctx.b);
    let g1 = gendo_domdim_crosscheck(&ctx, &reg_b, bound)?;
    let d = c1.div(r).expect("r nonzero");
    let omega_m1 = module_mc(&algebra, &d)?;
    let r_mod = ctx.hom_functor_module(&omega_m1)?;
    let g2 = gendo_domdim_crosscheck(&ctx, &r_mod, bound)?;
    report.push(
        "prop22_crosscheck",
        g1.consistent
            && g2.consistent
            && g1.formula_agrees.unwrap_or(true)
            && g2.formula_agrees.unwrap_or(true),
        Grade::Exact,
        format!(
            "regular B: domdim {} iso {}; R: domdim {} iso {}",
            dim_detail(&g1.domdim),
            g1.iso.is_iso(),
            dim_detail(&g2.domdim),
            g2.iso.is_iso()
        ),
    );

    // trivial extension remark
    let qe = families::quantum_exterior_2(*field, &Scalar::from_int(*field, 2))?;
    let te = qe.trivial_extension();
    let te_ok = te.dim() == 8
        && te.check().is_ok()
        && te.radical()?.rows() == 7
        && te.symmetrizing_form().is_found();
    report.push(
        "trivial_extension",
        te_ok,
        Grade::Exact,
        "T(quantum 2-exterior, a=2) is 8-dimensional, local and symmetric".into(),
    );

    Ok(report)
}

/// Pick (i, l) per the Theorem 2.8(2) recipe, build the witness bundle, and
/// attach the closed-form criterion for the Liu-Schulz family.
fn witness_core(
    inputs: &FamilyInputs,
    depth: usize,
) -> Result<(serde_json::Value, bool, String), EngineError> {
    let FamilyInputs {
        field,
        r,
        cs,
        bound,
    } = inputs;
    let bound = *bound;
    let algebra = liu_schulz_ref(*field, r)?;
    let modules: Vec<Module> = cs
        .iter()
        .map(|c| module_mc(&algebra, c))
        .collect::<Result<_, _>>()?;
    // pick the first c whose self-Ext tail stops: B = End(A + M_c) with a
    // single non-projective summand keeps every computation small
    let mut chosen: Option<(usize, usize)> = None;
    'outer: for (i, m) in modules.iter().enumerate() {
        let mut calc = ExtCalculator::new(m)?;
        let mut last = None;
        for l in 1..=bound {
            if calc.ext_dim(m, l)? != 0 {
                last = Some(l);
            }
        }
        if let Some(l) = last {
            if l < bound {
                chosen = Some((i, l));
                break 'outer;
            }
        }
    }
    let (i, l) = chosen.ok_or_else(|| {
        EngineError::ScanFailed(
            "no index i with Ext^l(M_{c_i}, M_{c_i}) != 0 and a vanishing tail".into(),
        )
    })?;
    // the cosyzygy parameter d = c_i / r^l; the closed-form criterion needs
    // d off the r-orbit of c_i, so that Ext^j(M_{c_i}, M_d) = 0 for all j >= 1
    let c = &cs[i];
    let mut d = c.clone();
    for _ in 0..l {
        d = d.div(r).expect("r nonzero");
    }
    let criterion = if !on_infinite_r_orbit(r, c, &d) {
        Some(format!(
            "Ext^j(M_{{{c}}}, M_{{{d}}}) = 0 for all j >= 1: {d} is not r^t * {c} for any t >= 0 (r = {r})"
        ))
    } else {
        None
    };
    let x_summands = std::slice::from_ref(&modules[i]);
    let bundle = refute_nearly_gorenstein(
        &algebra,
        x_summands,
        SpecialInput::Given {
            m: &modules[i],
            l,
        },
        bound,
        depth,
        criterion.clone(),
    )?;
    let expected_cosyz: Vec<DimensionValue> =
        (1..=depth).map(DimensionValue::Exact).collect();
    // over a finite field r has finite order, so the closed-form criterion is
    // out of reach and the bounded certificates are the best possible
    let criterion_reachable = unity_order(r, 4096).is_none();
    let ok = bundle.domdim_r == DimensionValue::AtLeast(bound + 1)
        && (criterion.is_some() || !criterion_reachable)
        && bundle.codomdim_r == DimensionValue::Exact(0)
        && bundle.costable.vanishes()
        && !bundle.gorenstein_injective.holds_up_to_bound
        && bundle.gorenstein_injective.negative_certificate.is_some()
        && bundle.cosyzygy_codomdims == expected_cosyz
        && bundle.dual_stable_not_gp;
    let summary = format!(
        "R = Hom(A + X, Omega^-{l}(M_{{{}}})): domdim {} ({}), codomdim {}, costable: {}, not GI: {}, cosyzygy codomdims {:?}",
        cs[i],
        dim_detail(&bundle.domdim_r),
        if criterion.is_some() {
            "criterion-certified infinite"
        } else {
            "bounded only"
        },
        dim_detail(&bundle.codomdim_r),
        bundle.costable.vanishes(),
        bundle
            .gorenstein_injective
            .negative_certificate
            .as_deref()
            .unwrap_or("no certificate"),
        bundle
            .cosyzygy_codomdims
            .iter()
            .map(DimensionValue::to_string)
            .collect::<Vec<_>>()
    );
    Ok((bundle.to_json(), ok, summary))
}

fn witness(inputs: &FamilyInputs, depth: usize) -> Result<(serde_json::Value, String), EngineError> {
    let (json, ok, summary) = witness_core(inputs, depth)?;
    let text = format!("{summary}\nall expectations met: {ok}\n");
    Ok((json, text))
}

fn lspecial(inputs: &FamilyInputs) -> Result<(serde_json::Value, String), EngineError> {
    let algebra = liu_schulz_ref(inputs.field, &inputs.r)?;
    let mut rows = Vec::new();
    let mut text = format!(
        "l-special scan over M_c, r = {}, H = {}\n",
        inputs.r, inputs.bound
    );
    for c in &inputs.cs {
        let m = module_mc(&algebra, c)?;
        let verdict = l_special_scan(&m, inputs.bound)?;
        text.push_str(&match verdict {
            Some(l) => format!("c = {c}: candidate {l}-special up to H\n"),
            None => format!("c = {c}: no candidate\n"),
        });
        rows.push(serde_json::json!({
            "c": c.to_string(),
            "candidate_l": verdict,
        }));
    }
    let json = serde_json::json!({
        "r": inputs.r.to_string(),
        "bound": inputs.bound,
        "results": rows,
    });
    Ok((json, text))
}

#[derive(serde::Deserialize)]
struct Job {
    op: String,
    #[serde(default)]
    bound: Option<usize>,
    #[serde(default)]
    i: Option<usize>,
    #[serde(default)]
    algebra: Option<fdalg::io::AlgebraJson>,
    #[serde(default)]
    module: Option<fdalg::io::ModuleJson>,
    #[serde(default)]
    module2: Option<fdalg::io::ModuleJson>,
    #[serde(default)]
    generator: Option<fdalg::io::ModuleJson>,
}

fn job_module(
    j: Option<fdalg::io::ModuleJson>,
    over: Option<&AlgebraRef>,
) -> Result<(Module, AlgebraRef), EngineError> {
    let j = j.ok_or_else(|| EngineError::Parse("job is missing a module".into()))?;
    match over {
        Some(a) => {
            let check = j.algebra.into_algebra()?;
            if &check != a.as_ref() {
                return Err(EngineError::AlgebraMismatch);
            }
            let m = fdalg::io::ModuleJson {
                algebra: fdalg::io::AlgebraJson::from_algebra(a),
                dim: j.dim,
                actions: j.actions,
            }
            .into_module_over(a)?;
            Ok((m, Arc::clone(a)))
        }
        None => {
            let m = j.into_module()?;
            let a = Arc::clone(m.algebra());
            Ok((m, a))
        }
    }
}

fn compute(body: &str) -> Result<serde_json::Value, EngineError> {
    let job: Job = serde_json::from_str(body)?;
    let bound = job.bound.unwrap_or(fdalg::homological::DEFAULT_BOUND);
    let result = match job.op.as_str() {
        "check_algebra" => {
            let a = job
                .algebra
                .ok_or_else(|| EngineError::Parse("missing algebra".into()))?
                .into_algebra()?;
            a.check()?;
            serde_json::json!({ "dim": a.dim(), "valid": true })
        }
        "hom_dim" => {
            let (m, a) = job_module(job.module, None)?;
            let (n, _) = job_module(job.module2, Some(&a))?;
            serde_json::json!(hom_space(&m, &n)?.dim())
        }
        "ext_dim" => {
            let (m, a) = job_module(job.module, None)?;
            let (n, _) = job_module(job.module2, Some(&a))?;
            let i = job.i.ok_or_else(|| EngineError::Parse("missing i".into()))?;
            serde_json::json!(ext_dim(&m, &n, i)?)
        }
        "domdim" => {
            let (m, _) = job_module(job.module, None)?;
            dominant_dimension(&m, bound)?.to_json(bound, None)
        }
        "codomdim" => {
            let (m, _) = job_module(job.module, None)?;
            codominant_dimension(&m, bound)?.to_json(bound, None)
        }
        "tau" => {
            let (m, _) = job_module(job.module, None)?;
            let tau = ar_translate(&m)?;
            serde_json::to_value(fdalg::io::ModuleJson::from_module(&tau))?
        }
        "approximation" => {
            let (n, a) = job_module(job.module, None)?;
            let (g, _) = job_module(job.generator, Some(&a))?;
            let step = minimal_right_approximation(&g, &n)?;
            serde_json::json!({
                "source_dim": step.source.dim(),
                "kernel_dim": step.kernel.dim(),
                "is_isomorphism": step.is_isomorphism(),
                "multiplicities": step.multiplicities,
            })
        }
        "stable" => {
            let (m, _) = job_module(job.module, None)?;
            match fdalg::homological::is_stable(&m, bound)? {
                TailVerdict::VanishesUpTo(h) => serde_json::json!({ "stable_up_to": h }),
                TailVerdict::FirstNonzero(i) => serde_json::json!({ "first_nonzero": i }),
            }
        }
        other => {
            return Err(EngineError::Parse(format!("unknown op: {other}")));
        }
    };
    Ok(serde_json::json!({ "op": job.op, "result": result }))
}
