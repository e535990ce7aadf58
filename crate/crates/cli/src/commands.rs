//! The six commands: each declares its keys, builds a report and a CSV view,
//! and says whether the run passed.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use spinorbasis::quadrature::RefinementPolicy;
use spinorbasis::scalar_basis::{
    biorthogonality_matrix_with, eval_scalar, gram_matrix_with, identity_deviation, EvaluationPoint, ExpansionTable,
    OneCenterRule, RadialFamily, ScalarOrbital, ScalarQN, Space, WeightMode,
};
use spinorbasis::specfun::{clebsch_gordan_exact, AngularPair, HalfInteger};
use spinorbasis::spinor_basis::{
    assemble_spinor, eval_spinor, spinor_coefficient, Sign, SpinorDescriptor, SpinorOrbital, SpinorQN,
};
use spinorbasis::theorems::{
    expansion_terms_for, expansion_terms_literal, fourier_consistency, has_unconverged,
    linearize_product_by_projection, linearize_product_with, sample_points, spinor_fourier_consistency,
    term_list_difference, translate_scalars, translate_spinor, LambdaRange, TranslationOptions,
};

use crate::config::{Format, JobConfig, KeySpec};
use crate::error::{CliError, Status};
use crate::output::{envelope, f, i, to_value, Rendered, Table};
use crate::suite::{self, SuiteOptions};

/// Static description of a command.
pub struct CommandSpec {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [KeySpec],
    pub default_format: Format,
}

const fn key(name: &'static str, default: &'static str, help: &'static str) -> KeySpec {
    KeySpec { name, default, help }
}

pub const TABULATE_CG: CommandSpec = CommandSpec {
    name: "tabulate-cg",
    about: "Tabulate the spinor coupling coefficients a^{ls}_{j m_j}(λ) with an exact-rational residual column",
    keys: &[
        key("l_max", "1", "largest orbital angular momentum (≤ 12)"),
        key("s2", "1", "twice the spin (odd)"),
    ],
    default_format: Format::Csv,
};

pub const EVAL: CommandSpec = CommandSpec {
    name: "eval",
    about: "Evaluate a scalar or spinor orbital descriptor on a radial ray",
    keys: &[
        key("orbital", "", "path to a scalar or spinor descriptor JSON file"),
        key("space", "position", "position or momentum"),
        key("r_min", "0", "first radius (or |k|)"),
        key("r_max", "10", "last radius (or |k|)"),
        key("points", "10", "number of points on the ray"),
        key("theta", "0", "polar angle of the ray"),
        key("phi", "0", "azimuth of the ray"),
    ],
    default_format: Format::Csv,
};

pub const GRAM: CommandSpec = CommandSpec {
    name: "gram",
    about: "Gram (or barred-dual biorthogonality) matrix of a radial family",
    keys: &[
        key("family", "eto", "eto or sto"),
        key("alpha", "1", "ETO family index α ∈ {1, 0, -1, -2}"),
        key("zeta", "1.0", "orbital exponent ζ"),
        key("n_max", "4", "largest principal quantum number"),
        key("weight", "family", "family (w_α) or plain (unweighted L²)"),
        key("biorthogonal", "false", "compare barred duals against the basis instead"),
        key("radial_nodes", "200", "Gauss–Laguerre nodes"),
        key("degree", "96", "angular rule degree"),
        key("tolerance", "1e-10", "largest accepted |G - I| for orthonormal families"),
        key("include_matrix", "false", "write every matrix entry into the JSON report"),
    ],
    default_format: Format::Json,
};

pub const EXPAND: CommandSpec = CommandSpec {
    name: "expand",
    about: "Expand a spinor product K_a†K_b into scalar products and linearize each onto an ETO set",
    keys: &[
        key("family", "eto", "eto or sto (both spinors)"),
        key("alpha", "0", "ETO index of the spinor family"),
        key("zeta", "1.0", "exponent of the spinor family"),
        key("s2", "1", "twice the spin"),
        key("n_a", "1", "left spinor n"),
        key("l_a", "0", "left spinor l"),
        key("t_a", "1", "left spinor t (+1 or -1)"),
        key("mj2_a", "1", "left spinor 2 m_j"),
        key("n_b", "1", "right spinor n"),
        key("l_b", "0", "right spinor l"),
        key("t_b", "1", "right spinor t"),
        key("mj2_b", "1", "right spinor 2 m_j"),
        key("target_alpha", "0", "ETO index of the linearization basis"),
        key("target_zeta", "2.0", "exponent of the linearization basis"),
        key("n_max", "4", "linearization n_max"),
        key("l_max", "3", "linearization l_max"),
        key("cross_check", "true", "also project each product on a 3D grid and compare"),
        key("radial_nodes", "120", "radial nodes for residuals and the cross-check"),
        key("degree", "32", "angular degree for residuals and the cross-check"),
    ],
    default_format: Format::Json,
};

pub const TRANSLATE: CommandSpec = CommandSpec {
    name: "translate",
    about: "One-range translation of a spinor (or scalar) orbital by y with a convergence report",
    keys: &[
        key("kind", "spinor", "spinor or scalar"),
        key("family", "eto", "eto or sto (the translated orbital)"),
        key("alpha", "0", "ETO index of the translated orbital"),
        key("zeta", "1.0", "exponent of the translated orbital"),
        key("s2", "1", "twice the spin (spinor)"),
        key("n", "1", "principal quantum number"),
        key("l", "0", "orbital angular momentum"),
        key("t", "1", "t = ±1 (spinor)"),
        key("mj2", "1", "2 m_j (spinor)"),
        key("m", "0", "m (scalar)"),
        key("target_alpha", "", "ETO index of the expansion basis (default: alpha, or 0 for sto)"),
        key("target_zeta", "", "exponent of the expansion basis (default: zeta)"),
        key("y", "0,0,1", "displacement x,y,z"),
        key("levels", "2,4,6,8", "truncation levels n_max"),
        key("l_max", "", "angular truncation (default: largest level - 1)"),
        key("samples", "40", "seeded position sample points for the pointwise error"),
        key("sample_radius", "6", "sample points lie within this radius"),
        key("k_samples", "20", "seeded momentum points for the Fourier check"),
        key("k_radius", "4", "momentum sample points lie within this |k|"),
        key("node_count", "48", "base radial nodes of the two-centre grid"),
        key("degree", "32", "base angular degree of the two-centre grid"),
        key("max_level", "4", "refinement budget (each level doubles every grid dimension)"),
        key("threshold", "1e-9", "per-entry refinement threshold relative to max |c|"),
    ],
    default_format: Format::Json,
};

pub const VERIFY: CommandSpec = CommandSpec {
    name: "verify",
    about: "Run the invariant suite; exit 0 iff every check passes",
    keys: &[key("suite", "full", "full or quick")],
    default_format: Format::Json,
};

pub const COMMANDS: [&CommandSpec; 6] = [&TABULATE_CG, &EVAL, &GRAM, &EXPAND, &TRANSLATE, &VERIFY];

fn payload(entries: Vec<(&str, Value)>) -> Map<String, Value> {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

// ---------------------------------------------------------------- tabulate-cg

/// Every a^{ls}_{j m_j}(λ) with l ≤ l_max, |l − s| ≤ j ≤ l + s and a valid
/// orbital projection m_l = m_j − s + λ.
pub fn tabulate_cg(cfg: &JobConfig) -> Result<(Rendered, Status), CliError> {
    let l_max = cfg.u32("l_max")?;
    let s2 = cfg.i32("s2")?;
    if l_max > 12 {
        return Err(usage(format!("l_max must be at most 12, got {l_max}")));
    }
    if s2 < 1 || s2 % 2 == 0 {
        return Err(usage(format!("s2 must be a positive odd integer, got {s2}")));
    }
    let s = HalfInteger::from_twice(s2);
    let mut table = Table::new(&[
        "l", "s2", "j2", "mj2", "lambda", "ml2", "ms2", "value", "oracle", "oracle_exact", "residual", "group_sum",
    ]);
    let mut rows = Vec::new();
    let (mut worst_residual, mut worst_sum) = (0.0f64, 0.0f64);
    for l in 0..=l_max {
        let l2 = 2 * l as i32;
        let mut j2 = (l2 - s2).abs();
        while j2 <= l2 + s2 {
            let j = HalfInteger::from_twice(j2);
            for mj2 in (-j2..=j2).step_by(2) {
                let mj = HalfInteger::from_twice(mj2);
                let group: Vec<i32> = (0..=s2).filter(|lam| (mj2 - s2 + 2 * lam).abs() <= l2).collect();
                let group_sum: f64 = group.iter().map(|&lam| spinor_coefficient(l, s, j, mj, lam).powi(2)).sum();
                worst_sum = worst_sum.max((group_sum - 1.0).abs());
                for lam in group {
                    let ml2 = mj2 - s2 + 2 * lam;
                    let ms2 = s2 - 2 * lam;
                    let value = spinor_coefficient(l, s, j, mj, lam);
                    let exact = clebsch_gordan_exact(
                        HalfInteger::from_int(l as i32),
                        HalfInteger::from_twice(ml2),
                        s,
                        HalfInteger::from_twice(ms2),
                        j,
                        mj,
                    );
                    let oracle = exact.to_f64();
                    let exact_text = match exact.sign {
                        0 => "0".to_string(),
                        sgn => format!("{}sqrt({})", if sgn < 0 { "-" } else { "" }, exact.square),
                    };
                    let residual = (value - oracle).abs();
                    worst_residual = worst_residual.max(residual);
                    table.push(vec![
                        i(l),
                        i(s2),
                        i(j2),
                        i(mj2),
                        i(lam),
                        i(ml2),
                        i(ms2),
                        f(value),
                        f(oracle),
                        exact_text.clone(),
                        f(residual),
                        f(group_sum),
                    ]);
                    rows.push(json!({
                        "l": l, "s2": s2, "j2": j2, "mj2": mj2, "lambda": lam, "ml2": ml2, "ms2": ms2,
                        "value": value, "oracle": oracle, "oracle_exact": exact_text, "residual": residual,
                        "group_sum": group_sum,
                    }));
                }
            }
            j2 += 2;
        }
    }
    let passed = worst_residual <= 1e-12 && worst_sum <= 1e-12;
    let json = envelope(
        cfg,
        payload(vec![
            ("rows", Value::Array(rows)),
            ("max_residual", json!(worst_residual)),
            ("max_sum_rule_deviation", json!(worst_sum)),
            ("passed", json!(passed)),
        ]),
    );
    Ok((Rendered { json, table }, if passed { Status::Ok } else { Status::VerificationFailed }))
}

// ----------------------------------------------------------------------- eval

/// Orbital descriptors accepted by `eval`.
#[derive(Debug, Clone, PartialEq)]
pub enum Descriptor {
    Scalar(ScalarOrbital),
    Spinor(SpinorOrbital),
}

pub fn parse_descriptor(text: &str) -> Result<Descriptor, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| usage(format!("descriptor is not JSON: {e}")))?;
    if value.get("s2").is_some() {
        serde_json::from_value::<SpinorOrbital>(value)
            .map(Descriptor::Spinor)
            .map_err(|e| usage(format!("invalid spinor descriptor: {e}")))
    } else {
        serde_json::from_value::<ScalarOrbital>(value)
            .map(Descriptor::Scalar)
            .map_err(|e| usage(format!("invalid scalar descriptor: {e}")))
    }
}

fn parse_space(s: &str) -> Result<Space, CliError> {
    match s {
        "position" => Ok(Space::Position),
        "momentum" => Ok(Space::Momentum),
        other => Err(usage(format!("space must be position or momentum, got '{other}'"))),
    }
}

pub fn eval(cfg: &JobConfig) -> Result<(Rendered, Status), CliError> {
    let path = cfg.optional("orbital").ok_or_else(|| usage("eval needs orbital=<descriptor.json>"))?;
    let text = fs::read_to_string(Path::new(path)).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let descriptor = parse_descriptor(&text)?;
    let space = parse_space(cfg.raw("space"))?;
    let (r_min, r_max, count) = (cfg.f64("r_min")?, cfg.f64("r_max")?, cfg.usize("points")?);
    if r_min < 0.0 || r_max < r_min || count == 0 {
        return Err(usage("need 0 ≤ r_min ≤ r_max and points ≥ 1"));
    }
    let dir = AngularPair::new(cfg.f64("theta")?, cfg.f64("phi")?)?;
    let (components, descriptor_json) = match &descriptor {
        Descriptor::Scalar(o) => {
            if o.space() != space {
                return Err(usage(format!("descriptor is in {:?} space but the grid is {space:?}", o.space())));
            }
            (1, to_value(o)?)
        }
        Descriptor::Spinor(o) => (o.component_count(), to_value(&SpinorDescriptor::from(o))?),
    };
    let radial_name = if space == Space::Position { "r" } else { "k" };
    let mut header: Vec<String> = vec![radial_name.into(), "theta".into(), "phi".into()];
    if components == 1 {
        header.extend(["re".into(), "im".into()]);
    } else {
        for c in 0..components {
            header.extend([format!("re_{c}"), format!("im_{c}")]);
        }
    }
    header.push("flag".into());
    let mut table = Table { header, rows: Vec::new() };
    let mut points = Vec::with_capacity(count);
    let mut flagged = 0usize;
    for k in 0..count {
        let radius = if count == 1 { r_min } else { r_min + (r_max - r_min) * k as f64 / (count - 1) as f64 };
        let pt = EvaluationPoint::new(space, radius, dir)?;
        let result = match &descriptor {
            Descriptor::Scalar(o) => eval_scalar(o, &pt).map(|v| vec![v]),
            Descriptor::Spinor(o) => eval_spinor(o, &pt),
        };
        let (values, flag) = match result {
            Ok(v) => (v, String::new()),
            Err(spinorbasis::Error::PoleAtOrigin(_)) => {
                flagged += 1;
                (vec![Complex64::new(f64::NAN, f64::NAN); components], "pole_at_origin".to_string())
            }
            Err(e) => return Err(e.into()),
        };
        let mut row = vec![f(radius), f(dir.theta()), f(dir.phi())];
        for v in &values {
            row.extend([f(v.re), f(v.im)]);
        }
        row.push(flag.clone());
        table.push(row);
        points.push(json!({
            "radius": radius,
            "theta": dir.theta(),
            "phi": dir.phi(),
            "values": values.iter().map(|v| json!([v.re, v.im])).collect::<Vec<_>>(),
            "flag": flag,
        }));
    }
    let json = envelope(
        cfg,
        payload(vec![
            ("orbital", descriptor_json),
            ("space", to_value(&space)?),
            ("points", Value::Array(points)),
            ("flagged_points", json!(flagged)),
        ]),
    );
    Ok((Rendered { json, table }, Status::Ok))
}

// ----------------------------------------------------------------------- gram

fn family_from(cfg: &JobConfig, kind_key: &str, alpha_key: &str, zeta_key: &str) -> Result<RadialFamily, CliError> {
    let zeta = cfg.f64(zeta_key)?;
    match cfg.raw(kind_key) {
        "eto" => Ok(RadialFamily::eto(cfg.i32(alpha_key)?, zeta)?),
        "sto" => Ok(RadialFamily::sto(zeta)?),
        other => Err(usage(format!("{kind_key} must be eto or sto, got '{other}'"))),
    }
}

pub fn gram(cfg: &JobConfig) -> Result<(Rendered, Status), CliError> {
    let family = family_from(cfg, "family", "alpha", "zeta")?;
    let n_max = cfg.u32("n_max")?;
    if n_max == 0 || n_max > 30 {
        return Err(usage(format!("n_max must be in 1..=30, got {n_max}")));
    }
    let mode = match cfg.raw("weight") {
        "family" => WeightMode::FamilyWeight,
        "plain" => WeightMode::PlainL2,
        other => return Err(usage(format!("weight must be family or plain, got '{other}'"))),
    };
    let biorthogonal = cfg.bool("biorthogonal")?;
    let rule = OneCenterRule { radial_nodes: cfg.usize("radial_nodes")?, degree: cfg.usize("degree")? };
    let tolerance = cfg.f64("tolerance")?;
    let matrix = if biorthogonal {
        if !family.is_eto() {
            return Err(usage("barred duals exist only for ETO families"));
        }
        biorthogonality_matrix_with(family, n_max, rule)?
    } else {
        gram_matrix_with(family, mode, n_max, rule)?
    };
    let qns = ScalarQN::enumerate(n_max, n_max - 1);
    let deviation = identity_deviation(&matrix);
    let (mut off, mut diag) = (0.0f64, 0.0f64);
    let mut table = Table::new(&["row", "col", "n", "l", "m", "n2", "l2", "m2", "re", "im"]);
    let mut entries = Vec::new();
    for (r, qa) in qns.iter().enumerate() {
        for (c, qb) in qns.iter().enumerate() {
            let v = matrix[(r, c)];
            if r == c {
                diag = diag.max((v - 1.0).norm());
            } else {
                off = off.max(v.norm());
            }
            table.push(vec![
                i(r),
                i(c),
                i(qa.n()),
                i(qa.l()),
                i(qa.m()),
                i(qb.n()),
                i(qb.l()),
                i(qb.m()),
                f(v.re),
                f(v.im),
            ]);
            entries.push(json!([r, c, v.re, v.im]));
        }
    }
    // Orthonormality is only claimed for ETO families under their own weight
    // (or for the barred-dual pairing).
    let checked = family.is_eto() && (biorthogonal || mode == WeightMode::FamilyWeight);
    let passed = !checked || deviation <= tolerance;
    let mut body = vec![
        ("family", to_value(&family)?),
        ("n_max", json!(n_max)),
        ("size", json!(qns.len())),
        ("weight", json!(cfg.raw("weight"))),
        ("biorthogonal", json!(biorthogonal)),
        ("identity_deviation", json!(deviation)),
        ("max_off_diagonal", json!(off)),
        ("max_diagonal_deviation", json!(diag)),
        ("checked", json!(checked)),
        ("tolerance", json!(tolerance)),
        ("passed", json!(passed)),
        ("quadrature", json!({"node_count": rule.radial_nodes, "scale": 2.0 * family.zeta(), "degree": rule.degree, "refinement_levels": 0})),
        ("basis", to_value(&qns)?),
    ];
    if cfg.bool("include_matrix")? {
        body.push(("matrix", Value::Array(entries)));
    }
    let json = envelope(cfg, payload(body));
    Ok((Rendered { json, table }, if passed { Status::Ok } else { Status::VerificationFailed }))
}

// --------------------------------------------------------------------- expand

fn sign_from(v: i32, key: &str) -> Result<Sign, CliError> {
    Sign::try_from(v).map_err(|_| usage(format!("{key} must be +1 or -1, got {v}")))
}

fn spinor_from(cfg: &JobConfig, s2: i32, suffix: &str, family: RadialFamily) -> Result<SpinorOrbital, CliError> {
    let k = |name: &str| format!("{name}{suffix}");
    let qn = SpinorQN::from_twice(
        s2,
        cfg.u32(&k("n"))?,
        cfg.u32(&k("l"))?,
        sign_from(cfg.i32(&k("t"))?, &k("t"))?,
        cfg.i32(&k("mj2"))?,
    )?;
    Ok(assemble_spinor(qn, family, false)?)
}

pub fn expand(cfg: &JobConfig) -> Result<(Rendered, Status), CliError> {
    let family = family_from(cfg, "family", "alpha", "zeta")?;
    let target = RadialFamily::eto(cfg.i32("target_alpha")?, cfg.f64("target_zeta")?)?;
    let s2 = cfg.i32("s2")?;
    let a = spinor_from(cfg, s2, "_a", family)?;
    let b = spinor_from(cfg, s2, "_b", family)?;
    let (n_max, l_max) = (cfg.u32("n_max")?, cfg.u32("l_max")?);
    if n_max == 0 || n_max > 20 {
        return Err(usage(format!("n_max must be in 1..=20, got {n_max}")));
    }
    let rule = OneCenterRule { radial_nodes: cfg.usize("radial_nodes")?, degree: cfg.usize("degree")? };
    let cross_check = cfg.bool("cross_check")?;

    let terms = expansion_terms_for(&a, &b)?;
    let even = expansion_terms_literal(a.qn, b.qn, family, family, LambdaRange::EvenBlocks)?;
    let every = expansion_terms_literal(a.qn, b.qn, family, family, LambdaRange::AllIntegers)?;
    let even_diff = term_list_difference(&terms, &even);
    let every_diff = term_list_difference(&terms, &every);

    let mut table = Table::new(&["term", "n", "l", "m", "re", "im"]);
    let mut term_reports = Vec::new();
    let mut worst_cross = 0.0f64;
    for (k, term) in terms.iter().enumerate() {
        let linear = linearize_product_with(term, target, n_max, l_max, rule)?;
        let mut report = json!({"term": term, "table": linear});
        if cross_check {
            let brute = linearize_product_by_projection(term, target, n_max, l_max, rule)?;
            let peak = linear.max_abs().max(f64::MIN_POSITIVE);
            let rel = linear
                .entries
                .iter()
                .zip(&brute.entries)
                .map(|(x, y)| (x.value() - y.value()).norm() / peak)
                .fold(0.0, f64::max);
            worst_cross = worst_cross.max(rel);
            report["projection_relative_deviation"] = json!(rel);
        }
        for e in &linear.entries {
            table.push(vec![i(k), i(e.n), i(e.l), i(e.m), f(e.re), f(e.im)]);
        }
        term_reports.push(report);
    }
    let passed = even_diff <= 1e-12 && (!cross_check || worst_cross <= 1e-10);
    let json = envelope(
        cfg,
        payload(vec![
            ("left", to_value(&SpinorDescriptor::from(&a))?),
            ("right", to_value(&SpinorDescriptor::from(&b))?),
            ("target", to_value(&target)?),
            ("terms", Value::Array(term_reports)),
            ("block_formula_difference", json!({"even_block_labels": even_diff, "all_integer_labels": every_diff})),
            ("max_projection_relative_deviation", if cross_check { json!(worst_cross) } else { Value::Null }),
            ("passed", json!(passed)),
        ]),
    );
    Ok((Rendered { json, table }, if passed { Status::Ok } else { Status::VerificationFailed }))
}

// ------------------------------------------------------------------ translate

fn table_rows(table: &mut Table, component: usize, t: &ExpansionTable) {
    for e in &t.entries {
        table.push(vec![i(component), i(t.nmax), i(e.n), i(e.l), i(e.m), f(e.re), f(e.im)]);
    }
}

pub fn translate(cfg: &JobConfig) -> Result<(Rendered, Status), CliError> {
    let family = family_from(cfg, "family", "alpha", "zeta")?;
    let target_alpha = match cfg.optional("target_alpha") {
        Some(_) => cfg.i32("target_alpha")?,
        None if family.is_eto() => family.alpha(),
        None => 0,
    };
    let target_zeta = match cfg.optional("target_zeta") {
        Some(_) => cfg.f64("target_zeta")?,
        None => family.zeta(),
    };
    let target = RadialFamily::eto(target_alpha, target_zeta)?;
    let y = cfg.vector3("y")?;
    let levels = cfg.u32_list("levels")?;
    if levels.is_empty() || levels.contains(&0) || levels.iter().any(|&n| n > 20) {
        return Err(usage("levels must be a non-empty list of integers in 1..=20"));
    }
    let top = *levels.iter().max().expect("non-empty");
    let l_max = match cfg.optional("l_max") {
        Some(_) => cfg.u32("l_max")?,
        None => top - 1,
    };
    let opts = TranslationOptions {
        node_count: cfg.usize("node_count")?,
        degree: cfg.usize("degree")?,
        policy: RefinementPolicy {
            threshold: cfg.f64("threshold")?,
            max_level: cfg.u32("max_level")?,
            ..RefinementPolicy::default()
        },
    };
    if opts.node_count == 0 || opts.policy.max_level > 6 {
        return Err(usage("node_count must be positive and max_level at most 6"));
    }
    let samples = sample_points(cfg.seed, cfg.usize("samples")?, Space::Position, cfg.f64("sample_radius")?);
    let k_points = sample_points(cfg.seed.wrapping_add(1), cfg.usize("k_samples")?, Space::Momentum, cfg.f64("k_radius")?);
    let mut table = Table::new(&["component", "nmax", "n", "l", "m", "re", "im"]);

    let (body, unconverged) = match cfg.raw("kind") {
        "spinor" => {
            let qn = SpinorQN::from_twice(
                cfg.i32("s2")?,
                cfg.u32("n")?,
                cfg.u32("l")?,
                sign_from(cfg.i32("t")?, "t")?,
                cfg.i32("mj2")?,
            )?;
            let orb = assemble_spinor(qn, family, false)?;
            let tr = translate_spinor(&orb, y, target, &levels, l_max, &samples, &opts)?;
            let fourier = spinor_fourier_consistency(&orb, &tr, &k_points)?;
            for (c, tables) in tr.tables.iter().enumerate() {
                table_rows(&mut table, c, tables.last().expect("one table per level"));
            }
            let unconverged = has_unconverged(&tr.tables.concat());
            let body = vec![
                ("spinor", to_value(&SpinorDescriptor::from(&orb))?),
                ("target", to_value(&target)?),
                ("displacement", json!(y)),
                ("levels", json!(tr.levels)),
                ("tables", to_value(&tr.tables)?),
                ("report", to_value(&tr.report)?),
                ("fourier_deviation", json!(fourier)),
                ("momentum_samples", to_value(&k_points)?),
            ];
            (body, unconverged)
        }
        "scalar" => {
            let qn = ScalarQN::new(cfg.u32("n")?, cfg.u32("l")?, cfg.i32("m")?)?;
            let orb = ScalarOrbital::position(family, qn);
            let tables = translate_scalars(std::slice::from_ref(&orb), y, target, &levels, l_max, &opts)?.remove(0);
            let fourier = fourier_consistency(&tables, &orb, y, &k_points)?;
            let mut level_reports = Vec::new();
            for t in &tables {
                let mut worst = 0.0f64;
                for p in &samples {
                    let x = p.cartesian();
                    let shifted = EvaluationPoint::from_cartesian(Space::Position, [x[0] - y[0], x[1] - y[1], x[2] - y[2]]);
                    worst = worst.max((eval_scalar(&orb, &shifted)? - t.synthesize(p)?).norm());
                }
                level_reports.push(json!({"nmax": t.nmax, "residual_l2w": t.residual_l2w, "max_pointwise": worst}));
            }
            table_rows(&mut table, 0, tables.last().expect("one table per level"));
            let unconverged = has_unconverged(&tables);
            let body = vec![
                ("orbital", to_value(&orb)?),
                ("target", to_value(&target)?),
                ("displacement", json!(y)),
                ("levels", json!(levels)),
                ("tables", to_value(&tables)?),
                (
                    "report",
                    json!({
                        "case": format!("scalar {qn} {family} y=[{}, {}, {}] target {target}", y[0], y[1], y[2]),
                        "levels": level_reports,
                        "samples": samples,
                        "flags": tables.last().map(|t| t.flags.clone()).unwrap_or_default(),
                    }),
                ),
                ("fourier_deviation", json!(fourier)),
                ("momentum_samples", to_value(&k_points)?),
            ];
            (body, unconverged)
        }
        other => return Err(usage(format!("kind must be spinor or scalar, got '{other}'"))),
    };
    let mut body = body;
    body.push(("converged", json!(!unconverged)));
    let json = envelope(cfg, payload(body));
    Ok((Rendered { json, table }, if unconverged { Status::NotConverged } else { Status::Ok }))
}

// --------------------------------------------------------------------- verify

pub fn verify(cfg: &JobConfig) -> Result<(Rendered, Status), CliError> {
    let quick = match cfg.raw("suite") {
        "full" => false,
        "quick" => true,
        other => return Err(usage(format!("suite must be full or quick, got '{other}'"))),
    };
    let checks = suite::run_all(SuiteOptions { seed: cfg.seed, quick });
    let failures: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let not_converged: Vec<&str> = checks.iter().filter(|c| c.not_converged).map(|c| c.name.as_str()).collect();
    let mut table = Table::new(&["criterion", "name", "passed", "not_converged", "measured", "tolerance", "summary"]);
    for c in &checks {
        table.push(vec![
            i(c.criterion),
            c.name.clone(),
            i(c.passed),
            i(c.not_converged),
            f(c.measured),
            f(c.tolerance),
            c.summary.clone(),
        ]);
    }
    let status = if !failures.is_empty() {
        Status::VerificationFailed
    } else if !not_converged.is_empty() {
        Status::NotConverged
    } else {
        Status::Ok
    };
    let json = envelope(
        cfg,
        payload(vec![
            ("suite", json!(cfg.raw("suite"))),
            ("checks", to_value(&checks)?),
            ("failures", json!(failures)),
            ("not_converged", json!(not_converged)),
            ("passed", json!(status == Status::Ok)),
        ]),
    );
    Ok((Rendered { json, table }, status))
}

pub fn dispatch(cfg: &JobConfig) -> Result<(Rendered, Status), CliError> {
    match cfg.command {
        "tabulate-cg" => tabulate_cg(cfg),
        "eval" => eval(cfg),
        "gram" => gram(cfg),
        "expand" => expand(cfg),
        "translate" => translate(cfg),
        "verify" => verify(cfg),
        other => Err(usage(format!("unknown command '{other}'"))),
    }
}
