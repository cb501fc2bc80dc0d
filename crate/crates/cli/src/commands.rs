//! Command implementations. Each returns the full text to print so output
//! is testable and byte-for-byte deterministic.

use std::fmt::Write as _;

use serde::Serialize;

use tdl_core::action::Action;
use tdl_core::appcalc::{alternating_table, sym_sign_table, GroupHomologyRow};
use tdl_core::arith::Prime;
use tdl_core::dlalgebra::Normalizer;
use tdl_core::freealg::{basis, enumerate_dmodule_basis, poincare_table};
use tdl_core::grading::Bidegree;

use crate::config::Settings;
use crate::error::CliError;
use crate::expr::{parse_and_eval, parse_dl_element, parse_opword};

/// Version of every JSON document the tool emits.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Tsv,
    Json,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

fn action(settings: &Settings) -> Action {
    Action::new(settings.ctx.clone()).with_rewrite_budget(settings.rewrite_budget)
}

pub fn rewrite(settings: &Settings, word: &str) -> Result<String, CliError> {
    let prime = settings.ctx.prime();
    let e = parse_dl_element(word, prime)?;
    let out = Normalizer::new(prime).with_budget(settings.rewrite_budget).normalize(&e)?;
    Ok(format!("{out}\n"))
}

pub fn act(settings: &Settings, op: &str, element: &str) -> Result<String, CliError> {
    let ops = parse_opword(op)?;
    let a = action(settings);
    let e = parse_and_eval(element, &a)?;
    Ok(format!("{}\n", a.apply_word(&ops, &e)?))
}

/// Normal form of an element expression.
pub fn eval(settings: &Settings, element: &str) -> Result<String, CliError> {
    Ok(format!("{}\n", parse_and_eval(element, &action(settings))?))
}

#[derive(Serialize)]
struct BasisDoc<'a> {
    schema_version: u32,
    p: u32,
    grade: &'a [i64],
    degree: i64,
    max_charge: u64,
    basis: Vec<String>,
}

pub fn basis_cmd(settings: &Settings, grade: &[i64], degree: i64, format: Format) -> Result<String, CliError> {
    let ctx = &settings.ctx;
    let g = ctx.grading().group().element(grade.to_vec())?;
    let monomials = basis(ctx, &Bidegree::new(g, degree), settings.cutoffs.max_charge)?;
    let lines: Vec<String> = monomials.iter().map(|m| m.to_string()).collect();
    Ok(match format {
        Format::Tsv => lines.iter().map(|l| format!("{l}\n")).collect(),
        Format::Json => to_json(&BasisDoc {
            schema_version: SCHEMA_VERSION,
            p: ctx.prime().get(),
            grade,
            degree,
            max_charge: settings.cutoffs.max_charge,
            basis: lines,
        }),
    })
}

#[derive(Serialize)]
struct TableRow {
    charge: u64,
    grade: Vec<i64>,
    degree: i64,
    dimension: u64,
}

#[derive(Serialize)]
struct TableDoc {
    schema_version: u32,
    p: u32,
    max_degree: i64,
    max_charge: u64,
    rows: Vec<TableRow>,
}

fn join(coords: &[i64]) -> String {
    coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}

pub fn table(settings: &Settings, format: Format) -> Result<String, CliError> {
    let ctx = &settings.ctx;
    let t = poincare_table(ctx, settings.cutoffs.max_degree, settings.cutoffs.max_charge)?;
    let rows: Vec<TableRow> = t
        .entries()
        .map(|(k, dim)| TableRow {
            charge: k.charge,
            grade: k.grade.coords().to_vec(),
            degree: k.degree,
            dimension: dim,
        })
        .collect();
    Ok(match format {
        Format::Tsv => {
            let mut s = String::from("charge\tgrade\tdegree\tdimension\n");
            for r in &rows {
                writeln!(s, "{}\t{}\t{}\t{}", r.charge, join(&r.grade), r.degree, r.dimension).unwrap();
            }
            s
        }
        Format::Json => to_json(&TableDoc {
            schema_version: SCHEMA_VERSION,
            p: ctx.prime().get(),
            max_degree: settings.cutoffs.max_degree,
            max_charge: settings.cutoffs.max_charge,
            rows,
        }),
    })
}

#[derive(Serialize)]
struct DmoduleEntry {
    generator: String,
    class: String,
    degree: i64,
    charge: u64,
}

#[derive(Serialize)]
struct DmoduleDoc {
    schema_version: u32,
    p: u32,
    max_degree: i64,
    max_charge: u64,
    classes: Vec<DmoduleEntry>,
}

/// Basis of the free module over the operation algebra on each generator
/// (or on one named generator).
pub fn dmodule(settings: &Settings, generator: Option<&str>, format: Format) -> Result<String, CliError> {
    let ctx = &settings.ctx;
    let prime = ctx.prime();
    let gens = match generator {
        Some(name) => vec![ctx.generator(name)?.clone()],
        None => ctx.generators().to_vec(),
    };
    let mut entries = Vec::new();
    for g in &gens {
        for q in enumerate_dmodule_basis(ctx, g, settings.cutoffs.max_degree, settings.cutoffs.max_charge)? {
            entries.push(DmoduleEntry {
                generator: g.name.clone(),
                class: q.to_string(),
                degree: q.degree(prime),
                charge: q.charge(prime),
            });
        }
    }
    Ok(match format {
        Format::Tsv => {
            let mut s = String::from("generator\tdegree\tcharge\tclass\n");
            for e in &entries {
                writeln!(s, "{}\t{}\t{}\t{}", e.generator, e.degree, e.charge, e.class).unwrap();
            }
            s
        }
        Format::Json => to_json(&DmoduleDoc {
            schema_version: SCHEMA_VERSION,
            p: prime.get(),
            max_degree: settings.cutoffs.max_degree,
            max_charge: settings.cutoffs.max_charge,
            classes: entries,
        }),
    })
}

#[derive(Serialize)]
struct GroupRow {
    group: String,
    k: u64,
    degree: i64,
    dimension: u64,
    basis: Vec<String>,
}

#[derive(Serialize)]
struct GroupDoc {
    schema_version: u32,
    p: u32,
    rows: Vec<GroupRow>,
}

fn group_rows(p: Prime, rows: Vec<GroupHomologyRow>, format: Format) -> Result<String, CliError> {
    if let Some(r) = rows.iter().find(|r| r.charge_dimension != r.grading_dimension) {
        return Err(CliError::Invalid(format!(
            "charge and grading counts disagree for {} in degree {}",
            r.group, r.degree
        )));
    }
    let rows: Vec<GroupRow> = rows
        .into_iter()
        .map(|r| GroupRow {
            group: r.group.to_string(),
            k: r.group.k(),
            degree: r.degree,
            dimension: r.dimension,
            basis: r.basis,
        })
        .collect();
    Ok(match format {
        Format::Tsv => {
            let mut s = String::from("group\tdegree\tdimension\tbasis\n");
            for r in &rows {
                writeln!(s, "{}\t{}\t{}\t{}", r.group, r.degree, r.dimension, r.basis.join("; ")).unwrap();
            }
            s
        }
        Format::Json => to_json(&GroupDoc { schema_version: SCHEMA_VERSION, p: p.get(), rows }),
    })
}

/// `H_q(S_k; F_p^sgn)` for `k <= max_charge`, `q <= max_degree`.
pub fn example_sym_sign(p: Prime, max_charge: u64, max_degree: i64, format: Format) -> Result<String, CliError> {
    group_rows(p, sym_sign_table(p, max_charge, max_degree)?, format)
}

/// `H_q(A_k; F_p)` for `2 <= k <= max_charge`, `q <= max_degree`.
pub fn example_alternating(p: Prime, max_charge: u64, max_degree: i64, format: Format) -> Result<String, CliError> {
    group_rows(p, alternating_table(p, max_charge, max_degree)?, format)
}
