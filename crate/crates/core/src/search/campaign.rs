//! Canned sweeps with a known expected outcome.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{
    associativity, parsed, verify_universally, Property, SearchError, SearchOptions, SearchReport,
    SearchSpec, Target,
};
use crate::schema::builtin_schema;
use crate::term::OpSymbol;

pub const CAMPAIGNS: [&str; 4] = [
    "ld_no_idempotent",
    "remark_asymmetries",
    "minimal_semiring_gap",
    "identity_entailments",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Holds,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignCheck {
    pub label: String,
    pub expectation: Expectation,
    pub as_expected: bool,
    pub report: SearchReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CampaignReport {
    pub campaign: String,
    pub max_order: usize,
    pub checks: Vec<CampaignCheck>,
    pub counterexample_found: bool,
    pub all_as_expected: bool,
    pub summary: String,
}

struct Planned {
    label: String,
    expectation: Expectation,
    spec: SearchSpec,
}

fn plan(label: impl Into<String>, expectation: Expectation, spec: SearchSpec) -> Planned {
    let target = match expectation {
        Expectation::Holds => Target::Verify,
        Expectation::Counterexample => Target::FindCounterexample,
    };
    Planned {
        label: label.into(),
        expectation,
        spec: spec.with_target(target),
    }
}

fn schema_condition(name: &str, second: bool) -> Property {
    let schema = builtin_schema(name).expect("builtin schema");
    if second {
        Property::Satisfies(
            schema
                .condition_two()
                .expect("condition two claimed")
                .into(),
        )
    } else {
        Property::Satisfies(schema.condition_one())
    }
}

fn plans(name: &str, top: usize) -> Result<Vec<Planned>, SearchError> {
    use Expectation::*;
    let lsd = parsed("x(yz) = (xy)(xz)");
    let groupoids = |constraints: Vec<&str>, property| {
        SearchSpec::groupoids(
            1..=top,
            constraints.into_iter().map(parsed).collect(),
            property,
        )
    };
    Ok(match name {
        "ld_no_idempotent" => vec![plan(
            "left self-distributive groupoids have an idempotent",
            Counterexample,
            SearchSpec::groupoids(1..=top, vec![lsd], Property::HasIdempotent),
        )],
        "remark_asymmetries" => vec![
            plan(
                "multiplicative idempotents of a left semiring are additive",
                Counterexample,
                SearchSpec::left_semirings(1..=top, Property::MulIdemSubsetAddIdem),
            ),
            plan(
                "additive idempotents of a non-minimal left semiring are multiplicative",
                Counterexample,
                SearchSpec::left_semirings(
                    1..=top,
                    Property::IsMinimal.or(Property::AddIdemSubsetMulIdem),
                ),
            ),
            plan(
                "additive idempotents of a minimal left semiring are multiplicative",
                Holds,
                SearchSpec::left_semirings(
                    1..=top,
                    Property::IsMinimal.implies(Property::AddIdemSubsetMulIdem),
                ),
            ),
        ],
        "minimal_semiring_gap" => vec![plan(
            "minimal finite left semirings are trivial",
            Holds,
            SearchSpec::left_semirings(1..=top, Property::IsMinimal.implies(Property::Trivial)),
        )],
        "identity_entailments" => {
            let assoc = associativity(OpSymbol::Mul).to_string();
            vec![
                plan(
                    "associativity gives condition one (x, xy)",
                    Holds,
                    groupoids(vec![&assoc], schema_condition("associative", false)),
                ),
                plan(
                    "associativity gives condition two, t = y(xz)",
                    Holds,
                    groupoids(vec![&assoc], schema_condition("associative", true)),
                ),
                plan(
                    "associativity gives condition two, t = (yx)z",
                    Holds,
                    groupoids(vec![&assoc], schema_condition("associative-alt", true)),
                ),
                plan(
                    "(xy)(yz) = ((xy)y)z gives condition one (x, xy)",
                    Holds,
                    groupoids(
                        vec!["(xy)(yz) = ((xy)y)z"],
                        schema_condition("associative", false),
                    ),
                ),
                plan(
                    "(xz)(yz) = ((xz)y)z gives condition one (x, xy)",
                    Holds,
                    groupoids(
                        vec!["(xz)(yz) = ((xz)y)z"],
                        schema_condition("associative", false),
                    ),
                ),
                plan(
                    "(xy)(xz) = x(y(xz)) gives condition two, t = y(xz)",
                    Holds,
                    groupoids(
                        vec!["(xy)(xz) = x(y(xz))"],
                        schema_condition("associative", true),
                    ),
                ),
                plan(
                    "(xx)(yz) = ((xx)y)z gives condition one (x, (xx)y)",
                    Counterexample,
                    groupoids(
                        vec!["(xx)(yz) = ((xx)y)z"],
                        schema_condition("moufang4", false),
                    ),
                ),
                plan(
                    "(xx)(yz) = ((xx)y)z gives condition one (xx, (xx)y)",
                    Holds,
                    groupoids(
                        vec!["(xx)(yz) = ((xx)y)z"],
                        schema_condition("moufang4-xx", false),
                    ),
                ),
                plan(
                    "x(yz) = (xz)y gives condition one (x, xy)",
                    Holds,
                    groupoids(vec!["x(yz) = (xz)y"], schema_condition("twisted", false)),
                ),
                plan(
                    "x(yz) = (xz)y gives condition two, t = (xz)y",
                    Holds,
                    groupoids(vec!["x(yz) = (xz)y"], schema_condition("twisted", true)),
                ),
                plan(
                    "x(yz) = (xz)y gives an idempotent",
                    Holds,
                    groupoids(vec!["x(yz) = (xz)y"], Property::HasIdempotent),
                ),
                plan(
                    "left self-distributivity with x(xx) = (xx)x gives condition one (x(xx), xy)",
                    Holds,
                    groupoids(
                        vec!["x(yz) = (xy)(xz)", "x(xx) = (xx)x"],
                        schema_condition("selfdist", false),
                    ),
                ),
                plan(
                    "left self-distributivity with x(xx) = (xx)x gives condition two, t = yz",
                    Holds,
                    groupoids(
                        vec!["x(yz) = (xy)(xz)", "x(xx) = (xx)x"],
                        schema_condition("selfdist", true),
                    ),
                ),
                plan(
                    "left self-distributivity with x(xx) = (xx)x gives an idempotent",
                    Holds,
                    groupoids(
                        vec!["x(yz) = (xy)(xz)", "x(xx) = (xx)x"],
                        Property::HasIdempotent,
                    ),
                ),
            ]
        }
        other => return Err(SearchError::UnknownCampaign(other.to_string())),
    })
}

/// Runs a named campaign up to `opts.campaign_order`.
pub fn run_campaign(name: &str, opts: &SearchOptions) -> Result<CampaignReport, SearchError> {
    let top = opts.campaign_order;
    let mut checks = Vec::new();
    for p in plans(name, top)? {
        let report = verify_universally(&p.spec, opts)?;
        let as_expected = match p.expectation {
            Expectation::Holds => report.pass,
            Expectation::Counterexample => !report.pass,
        };
        checks.push(CampaignCheck {
            label: p.label,
            expectation: p.expectation,
            as_expected,
            report,
        });
    }
    let counterexample_found = checks.iter().any(|c| !c.report.pass);
    let all_as_expected = checks.iter().all(|c| c.as_expected);
    let summary = summarize(name, top, &checks);
    Ok(CampaignReport {
        campaign: name.to_string(),
        max_order: top,
        checks,
        counterexample_found,
        all_as_expected,
        summary,
    })
}

fn summarize(name: &str, top: usize, checks: &[CampaignCheck]) -> String {
    let failing: Vec<String> = checks
        .iter()
        .filter_map(|c| {
            c.report
                .witness
                .as_ref()
                .map(|w| format!("{} (order {})", c.label, w.order()))
        })
        .collect();
    if name == "minimal_semiring_gap" {
        return if failing.is_empty() {
            format!("no counterexample up to order {top}")
        } else {
            format!("counterexample found: {}", failing.join("; "))
        };
    }
    if failing.is_empty() {
        format!("all {} checks hold up to order {top}", checks.len())
    } else {
        format!("counterexamples: {}", failing.join("; "))
    }
}

/// Writes `<dir>/<campaign>.json` (pretty, trailing newline) and returns the path.
pub fn write_campaign_report(report: &CampaignReport, dir: &Path) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{}.json", report.campaign));
    let mut text = serde_json::to_string_pretty(report).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}
