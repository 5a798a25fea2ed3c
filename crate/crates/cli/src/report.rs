//! CSV rendering of search findings and the summary table.

use std::io::{Read, Write};

use equifac::analysis::{Provenance, RatioFinding, Table1Row};
use equifac::{MechanismSpec, Objective, Profile};

use crate::error::CliError;
use crate::parse::{parse_list, parse_rendered, render_f64};

pub const FINDING_COLUMNS: [&str; 9] = [
    "mechanism",
    "objective",
    "n",
    "profile",
    "mech_value",
    "opt_value",
    "ratio",
    "provenance",
    "seed",
];

fn join_profile(p: &Profile) -> String {
    p.locations().iter().map(|&x| render_f64(x)).collect::<Vec<_>>().join(";")
}

pub fn write_findings<W: Write>(out: W, findings: &[RatioFinding], seed: u64) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(FINDING_COLUMNS)?;
    for f in findings {
        w.write_record([
            f.mechanism.to_string(),
            f.objective.name().to_string(),
            f.profile.len().to_string(),
            join_profile(&f.profile),
            render_f64(f.mech_value),
            render_f64(f.opt_value),
            render_f64(f.ratio),
            f.provenance.name().to_string(),
            seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One parsed row of a findings CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FindingRow {
    pub mechanism: MechanismSpec,
    pub objective: Objective,
    pub profile: Profile,
    pub mech_value: f64,
    pub opt_value: f64,
    pub ratio: f64,
    pub provenance: Provenance,
    pub seed: u64,
}

pub fn read_findings<R: Read>(input: R) -> Result<Vec<FindingRow>, CliError> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().ne(FINDING_COLUMNS) {
        return Err(CliError::Usage(format!("unexpected header {headers:?}")));
    }
    let bad = |what: &str| CliError::Usage(format!("bad {what} column"));
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let profile = Profile::new(parse_list(&rec[3], ';')?)?;
        let n: usize = rec[2].parse().map_err(|_| bad("n"))?;
        if n != profile.len() {
            return Err(bad("n"));
        }
        rows.push(FindingRow {
            mechanism: rec[0].parse().map_err(|_| bad("mechanism"))?,
            objective: rec[1].parse().map_err(|_| bad("objective"))?,
            profile,
            mech_value: parse_rendered(&rec[4])?,
            opt_value: parse_rendered(&rec[5])?,
            ratio: parse_rendered(&rec[6])?,
            provenance: Provenance::parse(&rec[7]).ok_or_else(|| bad("provenance"))?,
            seed: rec[8].parse().map_err(|_| bad("seed"))?,
        });
    }
    Ok(rows)
}

pub fn write_table1<W: Write>(out: W, rows: &[Table1Row]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["section", "row", "column", "published", "computed", "delta", "status", "detail"])?;
    for r in rows {
        for (col, c) in [("1-G", &r.gini), ("Nash", &r.nash)] {
            w.write_record([
                r.section.to_string(),
                r.label.to_string(),
                col.to_string(),
                c.published.to_string(),
                c.computed.map(render_f64).unwrap_or_default(),
                c.delta().map(render_f64).unwrap_or_default(),
                c.status.name().to_string(),
                c.detail.clone(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
