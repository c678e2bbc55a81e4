use kmdual::parabolic::{
    average_standard, kill_nonminimal, parabolic_decomp_multiplicities, push_standard, pw_match, ParabolicCharacter,
    Variance,
};
use serde_json::json;

use super::{with, CmdResult, Context};
use crate::args::{Common, ParabolicCommand, ParabolicOptions, VarianceArg};
use crate::output::{Cell, Report, Table};

pub fn run(command: &ParabolicCommand) -> (&Common, CmdResult) {
    match command {
        ParabolicCommand::Push { word, opts, variance } => (&opts.common, push(word, opts, *variance)),
        ParabolicCommand::Average { word, opts } => (&opts.common, average(word, opts)),
        ParabolicCommand::Decomp { word, opts } => (&opts.common, decomp(word, opts)),
        ParabolicCommand::Match { word, opts } => (&opts.common, matching(word, opts)),
    }
}

fn character_rows(table: &mut Table, label: &str, c: &ParabolicCharacter) {
    for (x, g) in c.support() {
        table.push(vec![Cell::text(label), Cell::word(x.word()), Cell::int(g.shift), Cell::int(g.twist_doubled)]);
    }
}

fn push(word: &str, opts: &ParabolicOptions, variance: VarianceArg) -> CmdResult {
    let ctx = Context::load(&opts.common)?;
    let w = ctx.element(word)?;
    let theta = ctx.theta(&opts.theta)?;
    let variance = match variance {
        VarianceArg::Shriek => Variance::Shriek,
        VarianceArg::Star => Variance::Star,
    };
    let c = push_standard(&ctx.group, &w, &theta, variance)?;
    let mut table = Table::new(&["flavor", "coset", "shift", "twist_doubled"]);
    character_rows(&mut table, "parabolic", &c);
    let json = with(ctx.header(), json!({ "word": w.word(), "variance": variance, "character": c }));
    Ok((Report::new(json, table), true))
}

fn average(word: &str, opts: &ParabolicOptions) -> CmdResult {
    let ctx = Context::load(&opts.common)?;
    let w = ctx.element(word)?;
    let theta = ctx.theta(&opts.theta)?;
    let c = average_standard(&ctx.group, &w, &theta)?;
    let killed = kill_nonminimal(&ctx.group, &w, &theta);
    let mut table = Table::new(&["flavor", "coset", "shift", "twist_doubled"]);
    character_rows(&mut table, "whittaker", &c);
    let json = with(
        ctx.header(),
        json!({ "word": w.word(), "character": c, "simple_killed": killed }),
    );
    Ok((Report::new(json, table), true))
}

fn decomp(word: &str, opts: &ParabolicOptions) -> CmdResult {
    let ctx = Context::load(&opts.common)?;
    let w = ctx.element(word)?;
    let theta = ctx.theta(&opts.theta)?;
    let terms = parabolic_decomp_multiplicities(&ctx.kl(), &w, &theta)?;
    let mut table = Table::new(&["coset", "shift", "multiplicity"]);
    for t in &terms {
        table.push(vec![Cell::word(t.coset.word()), Cell::int(t.shift), Cell::int(t.multiplicity)]);
    }
    let json = with(
        ctx.header(),
        json!({ "word": w.word(), "theta": theta.generators(), "summands": terms }),
    );
    Ok((Report::new(json, table), true))
}

fn matching(word: &str, opts: &ParabolicOptions) -> CmdResult {
    let ctx = Context::load(&opts.common)?;
    let w = ctx.element(word)?;
    let theta = ctx.theta(&opts.theta)?;
    let (parabolic, whittaker) = pw_match(&ctx.group, &w, &theta)?;
    let mut table = Table::new(&["flavor", "coset", "shift", "twist_doubled"]);
    character_rows(&mut table, "parabolic", &parabolic);
    character_rows(&mut table, "whittaker", &whittaker);
    let json = with(
        ctx.header(),
        json!({ "coset": w.word(), "parabolic": parabolic, "whittaker": whittaker }),
    );
    Ok((Report::new(json, table), true))
}
