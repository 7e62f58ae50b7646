use clap::{Args, Subcommand};
use schur_core::coupling::{validate_axioms, Axiom, CouplingProvider};
use schur_core::gt::{dim, enumerate_patterns_capped, su3_codes, IrrepLabel, Su3ExampleProvider, DEFAULT_PATTERN_CAP};
use schur_core::HalfInt;
use serde_json::json;

use crate::error::CliResult;
use crate::inputs::int_list;
use crate::report::Report;

#[derive(Debug, Subcommand)]
pub enum GtCommand {
    /// Dimension of an SU(N) irrep.
    Dim(LabelArgs),
    /// Every Gelfand-Tsetlin pattern of an irrep with its z-weight.
    Patterns(PatternArgs),
    /// The two weight-(0,0) octet states in 3 x 3bar and the unique-output violation they witness.
    Su3Demo,
}

#[derive(Debug, Args)]
pub struct LabelArgs {
    /// Highest weight, e.g. 2,1,0.
    #[arg(long, allow_hyphen_values = true)]
    pub label: String,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    #[command(flatten)]
    pub label: LabelArgs,
    /// Refuse irreps with more patterns than this.
    #[arg(long, default_value_t = DEFAULT_PATTERN_CAP)]
    pub cap: u128,
}

fn label(a: &LabelArgs) -> CliResult<IrrepLabel> {
    Ok(IrrepLabel::new(int_list(&a.label, "irrep label")?)?)
}

pub fn run(c: &GtCommand) -> CliResult<Report> {
    match c {
        GtCommand::Dim(a) => {
            let l = label(a)?;
            let d = dim(&l);
            let mut r = Report::new(json!({ "label": l.entries(), "dim": d.to_string() }), &["label", "dim"]);
            r.row(vec![format!("{:?}", l.entries()), d.to_string()]);
            Ok(r)
        }
        GtCommand::Patterns(a) => {
            let l = label(&a.label)?;
            let pats = enumerate_patterns_capped(&l, a.cap)?;
            let mut r = Report::new(json!(null), &["index", "pattern", "weight"]);
            let mut out = vec![];
            for (k, p) in pats.iter().enumerate() {
                let w = schur_core::gt::z_weight(p);
                out.push(json!({ "rows": p.rows(), "weight": w.to_string() }));
                r.row(vec![k.to_string(), p.to_string(), w.to_string()]);
            }
            r.note(format!("{:?}: {} patterns", l.entries(), pats.len()));
            r.json = json!({ "label": l.entries(), "dim": pats.len(), "patterns": out });
            Ok(r)
        }
        GtCommand::Su3Demo => su3_demo(),
    }
}

fn su3_demo() -> CliResult<Report> {
    use su3_codes::*;
    let p = Su3ExampleProvider;
    let mut r = Report::new(json!(null), &["state", "triplet", "antitriplet", "coefficient"]);
    let mut states = vec![];
    for (name, m) in [("A", OCTET_ZERO_A), ("B", OCTET_ZERO_B)] {
        let mut terms = vec![];
        for c in p.support(OCTET, m, &[TRIPLET, ANTITRIPLET]) {
            let v = p.value(OCTET, m, &[(TRIPLET, c[0]), (ANTITRIPLET, c[1])]);
            let exact = v.as_exact().map(|x| x.to_string()).unwrap_or_default();
            let (i, k) = (c[0].doubled() / 2, c[1].doubled() / 2);
            terms.push(json!({ "triplet": i, "antitriplet": k, "coefficient": exact, "decimal": v.to_complex().re }));
            r.row(vec![name.into(), i.to_string(), k.to_string(), exact]);
        }
        states.push(json!({ "state": name, "terms": terms }));
    }
    let report = validate_axioms(&p, HalfInt::from_int(0))?;
    let witnesses: Vec<_> = report
        .violations_of(Axiom::Gc4)
        .map(|v| {
            json!({
                "triplet": v.children_m[0].doubled() / 2,
                "antitriplet": v.children_m[1].doubled() / 2,
                "outputs": v.ms.len(),
            })
        })
        .collect();
    let orthonormal = report.violations_of(Axiom::Gc2).count() == 0;
    r.note(format!(
        "orthonormal: {orthonormal}; {} input pairs feed both weight-(0,0) states, so the output is not unique",
        witnesses.len()
    ));
    r.json = json!({ "states": states, "orthonormal": orthonormal, "violations": witnesses });
    Ok(r)
}
