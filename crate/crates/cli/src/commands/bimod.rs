use std::sync::Arc;

use kmdual::bimod::{decompose_labels, default_degree_bound, hom_graded, Bimodule};
use kmdual::hecke::hom_pairing;
use kmdual::{LaurentPoly, PolyRing, Side};
use serde_json::json;

use super::{poly_json, with, CmdResult, Context};
use crate::args::{BimodCommand, BimodOptions, Common, SideArg};
use crate::output::{Cell, Report, Table};

pub fn run(command: &BimodCommand) -> (&Common, CmdResult) {
    match command {
        BimodCommand::Bs { word, opts } => (&opts.common, bs(word, opts)),
        BimodCommand::Hom { x, y, opts, degree_bound } => (&opts.common, hom(x, y, opts, *degree_bound)),
        BimodCommand::Decompose { word, opts } => (&opts.common, decompose(word, opts)),
    }
}

fn side(opts: &BimodOptions) -> Side {
    match opts.side {
        SideArg::Equivariant => Side::Equivariant,
        SideArg::Monodromic => Side::Monodromic,
    }
}

fn ring(ctx: &Context, opts: &BimodOptions) -> Arc<PolyRing> {
    Arc::new(PolyRing::new(ctx.realization.clone(), side(opts)))
}

fn bs(word: &str, opts: &BimodOptions) -> CmdResult {
    let ctx = Context::load(&opts.common)?;
    let b = Bimodule::bott_samelson(ring(&ctx, opts), &ctx.word(word)?)?;
    let mut table = Table::new(&["generator", "degree", "weight"]);
    for (i, g) in b.generators().iter().enumerate() {
        table.push(vec![Cell::int(i), Cell::int(g.degree), Cell::int(g.weight)]);
    }
    let json = serde_json::to_value(b.to_doc()).expect("bimodule documents serialize");
    Ok((Report::new(json, table), true))
}

fn hom(x: &str, y: &str, opts: &BimodOptions, degree_bound: Option<i32>) -> CmdResult {
    let ctx = Context::load(&opts.common)?;
    let (xw, yw) = (ctx.word(x)?, ctx.word(y)?);
    let ring = ring(&ctx, opts);
    let bx = Bimodule::bott_samelson(ring.clone(), &xw)?;
    let by = Bimodule::bott_samelson(ring, &yw)?;
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(&bx, &by));
    let space = hom_graded(&bx, &by, bound)?;
    let rank = space.graded_rank()?;
    let kl = ctx.kl();
    let alg = kl.algebra();
    let predicted = hom_pairing(&kl, &alg.bott_samelson(&xw), &alg.bott_samelson(&yw));
    let matches = rank == predicted;
    let mut table = Table::new(&["degree", "dim", "label_degree", "label_weight"]);
    let mut dims = Vec::new();
    for (&d, &n) in &space.dims {
        let label = space.label(d);
        let cell = |v: Option<i32>| v.map_or(Cell::text("-"), Cell::int);
        table.push(vec![Cell::int(d), Cell::int(n), cell(label.map(|l| l.0)), cell(label.map(|l| l.1))]);
        dims.push(json!({ "degree": d, "dim": n, "label": label }));
    }
    let json = with(
        ctx.header(),
        json!({
            "side": space.side,
            "x": xw,
            "y": yw,
            "degree_bound": bound,
            "dims": dims,
            "graded_rank": poly_json(&rank, "v"),
            "pairing": poly_json(&predicted, "v"),
            "matches_pairing": matches,
        }),
    );
    Ok((Report::new(json, table), matches))
}

fn decompose(word: &str, opts: &BimodOptions) -> CmdResult {
    let ctx = Context::load(&opts.common)?;
    let w = ctx.word(word)?;
    let side = side(opts);
    let b = Bimodule::bott_samelson(ring(&ctx, opts), &w)?;
    let dec = decompose_labels(&b)?;
    let entries = dec.entries();
    // the summands, read as a Hecke algebra element in the KL basis
    let kl = ctx.kl();
    let expected = kl.to_kl(&kl.algebra().bott_samelson(&w));
    let mut got = kmdual::HeckeElement::zero(kmdual::hecke::Basis::KazhdanLusztig);
    for e in &entries {
        let n = match side {
            Side::Equivariant => e.shift,
            Side::Monodromic => -e.twist_doubled,
        };
        let x = ctx.group.from_word(&e.label)?;
        got.add_term(&x, &LaurentPoly::monomial(e.multiplicity as i64, n));
    }
    let matches = got == expected;
    let mut table = Table::new(&["label", "length", "shift", "twist_doubled", "multiplicity"]);
    for e in &entries {
        table.push(vec![
            Cell::word(&e.label),
            Cell::int(e.length),
            Cell::int(e.shift),
            Cell::int(e.twist_doubled),
            Cell::int(e.multiplicity),
        ]);
    }
    let json = with(
        ctx.header(),
        json!({ "side": side, "word": w, "summands": entries, "matches_hecke": matches }),
    );
    Ok((Report::new(json, table), matches))
}
