use kmdual::coxeter::{CosetKind, CosetSide};
use serde_json::json;

use super::{with, CmdResult, Context};
use crate::args::{CosetKindArg, CosetSideArg, GroupArgs};
use crate::output::{Cell, Report, Table};

pub fn run(args: &GroupArgs) -> CmdResult {
    let ctx = Context::load(&args.common)?;
    let g = &ctx.group;
    let elements = match &args.theta {
        None => g.elements_up_to(args.max_length),
        Some(gens) => {
            let theta = ctx.theta(gens)?;
            let side = match args.side {
                CosetSideArg::Left => CosetSide::Left,
                CosetSideArg::Right => CosetSide::Right,
            };
            let kind = match args.kind {
                CosetKindArg::Minimal => CosetKind::Minimal,
                CosetKindArg::Maximal => CosetKind::Maximal,
            };
            g.coset_representatives(&theta, side, kind, args.max_length)?
        }
    };
    let mut table = Table::new(&["word", "length", "left_descents", "right_descents"]);
    let mut rows = Vec::new();
    for w in &elements {
        let (l, r) = (w.left_descents(), w.right_descents());
        let join = |v: &[usize]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
        table.push(vec![Cell::word(w.word()), Cell::int(w.length()), Cell::text(join(&l)), Cell::text(join(&r))]);
        rows.push(json!({ "word": w.word(), "length": w.length(), "left_descents": l, "right_descents": r }));
    }
    let json = with(
        ctx.header(),
        json!({
            "max_length": args.max_length,
            "theta": args.theta,
            "side": args.theta.as_ref().map(|_| format!("{:?}", args.side).to_lowercase()),
            "kind": args.theta.as_ref().map(|_| format!("{:?}", args.kind).to_lowercase()),
            "elements": rows,
        }),
    );
    Ok((Report::new(json, table), true))
}
