use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use schur_core::coupling::{validate_axioms_capped, ProviderSpec, DEFAULT_VALIDATION_SUPPORT_CAP};
use schur_core::{clebsch_gordan, recoupling_tensor, triangular_delta, wigner_3j, wigner_6j, HalfInt, SixJLabel};
use serde_json::json;

use super::{half_json, halves, radical_json, scalar_json, scalar_text};
use crate::error::{CliError, CliResult};
use crate::inputs::{basis_string, coupling_tree, half, half_list};
use crate::report::Report;
use crate::Ctx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffKind {
    /// <j1 m1; j2 m2 | J M>
    Cg,
    /// (j1 j2 j3; m1 m2 m3)
    #[value(name = "3j")]
    ThreeJ,
    /// {a b f; c e d}
    #[value(name = "6j")]
    SixJ,
    /// Unitary recoupling coefficient for {a b f; c e d}.
    Recoupling,
    /// Triangle condition for (a, b, c).
    Delta,
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    pub kind: CoeffKind,
    /// Comma-separated labels such as `1/2,-1/2,1,0`, in the order shown for the kind.
    #[arg(allow_hyphen_values = true)]
    pub labels: String,
}

pub fn coeff(a: &CoeffArgs) -> CliResult<Report> {
    let v = half_list(&a.labels)?;
    let want = if a.kind == CoeffKind::Delta { 3 } else { 6 };
    if v.len() != want {
        return Err(CliError::Usage(format!("{:?} takes {want} labels, got {}", a.kind, v.len())));
    }
    let name = a.kind.to_possible_value().expect("named").get_name().to_string();
    let value = match a.kind {
        CoeffKind::Cg => clebsch_gordan(v[0], v[1], v[2], v[3], v[4], v[5])?,
        CoeffKind::ThreeJ => wigner_3j(v[0], v[1], v[2], v[3], v[4], v[5])?,
        CoeffKind::SixJ => wigner_6j(SixJLabel::new(v[0], v[1], v[2], v[3], v[4], v[5]))?,
        CoeffKind::Recoupling => recoupling_tensor(SixJLabel::new(v[0], v[1], v[2], v[3], v[4], v[5]))?,
        CoeffKind::Delta => {
            let d = triangular_delta(v[0], v[1], v[2])?;
            let mut r =
                Report::new(json!({ "kind": name, "labels": half_json(&v), "delta": d }), &["kind", "labels", "delta"]);
            r.row(vec![name, halves(&v), d.to_string()]);
            return Ok(r);
        }
    };
    let mut doc = radical_json(&value);
    doc["kind"] = json!(name);
    doc["labels"] = half_json(&v);
    let mut r = Report::new(doc, &["kind", "labels", "exact", "decimal"]);
    r.row(vec![name, halves(&v), value.to_string(), format!("{:.15}", value.to_f64())]);
    Ok(r)
}

#[derive(Debug, Args)]
pub struct AmplitudeArgs {
    /// Coupling tree file.
    #[arg(long)]
    pub tree: PathBuf,
    /// Basis string: m-values such as `1/2,-1/2`, or bits such as `10` when every leaf is a qubit.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
}

pub fn amplitude(a: &AmplitudeArgs) -> CliResult<Report> {
    let tree = coupling_tree(&a.tree)?;
    let x = basis_string(&tree, &a.x)?;
    let amp = tree.amplitude(&x)?;
    let mut doc = scalar_json(&amp);
    doc["x"] = half_json(&x);
    let mut r = Report::new(doc, &["x", "amplitude", "re", "im"]);
    let z = amp.to_complex();
    r.row(vec![halves(&x), scalar_text(&amp), z.re.to_string(), z.im.to_string()]);
    Ok(r)
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Coupling tree file.
    #[arg(long)]
    pub tree: PathBuf,
    /// Number of samples.
    #[arg(long, short = 'n', default_value_t = 1)]
    pub n: usize,
}

pub fn sample(a: &SampleArgs, ctx: &Ctx) -> CliResult<Report> {
    let tree = coupling_tree(&a.tree)?;
    let mut rng = ctx.rng();
    let draws: Vec<Vec<HalfInt>> = (0..a.n).map(|_| tree.sample(&mut rng)).collect::<Result<_, _>>()?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for d in &draws {
        *counts.entry(halves(d)).or_insert(0) += 1;
    }
    let mut r = Report::new(
        json!({ "seed": ctx.seed(), "samples": draws.iter().map(|d| half_json(d)).collect::<Vec<_>>(), "counts": counts }),
        &["shot", "x"],
    );
    r.note(format!("seed {}", ctx.seed().unwrap_or_default()));
    for (k, d) in draws.iter().enumerate() {
        r.row(vec![k.to_string(), halves(d)]);
    }
    Ok(r)
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// `cg`, `six-j:B`, `seq-cg:J1,J2,...`, `su3-example`, or a provider JSON object.
    #[arg(long)]
    pub provider: String,
    /// Largest label examined.
    #[arg(long, default_value = "2")]
    pub bound: String,
    /// Support entries examined per label combination before giving up.
    #[arg(long, default_value_t = DEFAULT_VALIDATION_SUPPORT_CAP)]
    pub cap: usize,
}

fn provider_spec(s: &str) -> CliResult<ProviderSpec> {
    let s = s.trim();
    if s.starts_with('{') {
        return serde_json::from_str(s).map_err(|e| CliError::parse("provider", e));
    }
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    Ok(match name {
        "cg" => ProviderSpec::Cg,
        "su3-example" => ProviderSpec::Su3Example,
        "six-j" => ProviderSpec::SixJ { b: half(arg)?.doubled() },
        "seq-cg" => ProviderSpec::SeqCg { intermediates: half_list(arg)?.iter().map(|h| h.doubled()).collect() },
        _ => return Err(CliError::parse("provider", format!("unknown provider `{name}`"))),
    })
}

pub fn validate(a: &ValidateArgs) -> CliResult<Report> {
    let provider = provider_spec(&a.provider)?.build()?;
    let report = validate_axioms_capped(provider.as_ref(), half(&a.bound)?, a.cap)?;
    let mut r = Report::new(
        serde_json::to_value(&report).expect("report serializes"),
        &["axiom", "j", "ms", "children_j", "children_m", "detail"],
    );
    r.note(format!(
        "{}: {} combinations, {} violations",
        report.provider,
        report.combinations_checked,
        report.violations.len()
    ));
    for v in &report.violations {
        r.row(vec![
            format!("{:?}", v.axiom),
            v.j.to_string(),
            halves(&v.ms),
            halves(&v.children_j),
            halves(&v.children_m),
            v.detail.clone(),
        ]);
    }
    Ok(r)
}
