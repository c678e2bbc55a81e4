use kmdual::duality::{em_check, reduced_word_pairs, DualMode};
use serde_json::json;

use super::{with, CmdResult, Context};
use crate::args::{Common, DualityCommand, Format};
use crate::error::CliError;
use crate::output::{Cell, Report, Table};

pub fn run(command: &DualityCommand) -> (&Common, CmdResult) {
    match command {
        DualityCommand::Check { common, max_length, symmetrizable_self, dump } => {
            (common, check(common, *max_length, *symmetrizable_self, *dump))
        }
    }
}

fn check(common: &Common, max_length: usize, symmetrizable_self: bool, dump: bool) -> CmdResult {
    let ctx = Context::load(common)?;
    let mode = if symmetrizable_self {
        if !ctx.realization.cartan.is_symmetrizable() {
            return Err(CliError::Usage("--symmetrizable-self needs a symmetrizable Cartan matrix".into()));
        }
        DualMode::SelfDual
    } else {
        DualMode::Transpose
    };
    let pairs = reduced_word_pairs(&ctx.group, max_length);
    let report = em_check(&ctx.realization, &pairs, max_length, mode)?;
    let passed = report.passed();

    let table = if dump {
        let mut t = Table::new(&["x", "y", "side", "degree", "weight", "dim"]);
        for p in &report.pairs {
            for (side, m) in [("equivariant", &p.equivariant), ("monodromic", &p.monodromic)] {
                for (d, w, n) in m.entries() {
                    t.push(vec![Cell::word(&p.x), Cell::word(&p.y), Cell::text(side), Cell::int(d), Cell::int(w), Cell::int(n)]);
                }
            }
        }
        t
    } else {
        // pass matrix: one row per x, one column per y
        let mut words: Vec<Vec<usize>> = Vec::new();
        for (x, _) in &pairs {
            if !words.contains(x) {
                words.push(x.clone());
            }
        }
        let names: Vec<String> = words.iter().map(|w| kmdual::coxeter::format_word(w)).collect();
        let mut headers = vec!["x \\ y"];
        headers.extend(names.iter().map(String::as_str));
        let mut t = Table::new(&headers);
        for x in &words {
            let mut row = vec![Cell::word(x)];
            for y in &words {
                let pass = report.pairs.iter().find(|p| &p.x == x && &p.y == y).is_some_and(|p| p.pass);
                row.push(Cell::text(if pass { "pass" } else { "FAIL" }));
            }
            t.push(row);
        }
        t
    };
    let json = with(
        ctx.header(),
        json!({
            "mode": report.mode,
            "max_length": max_length,
            "passed": passed,
            "pairs": report.pairs,
        }),
    );
    // the dump is CSV whatever the format flags say
    let forced = dump.then_some(Format::Csv);
    Ok((Report { json, table, forced }, passed))
}
