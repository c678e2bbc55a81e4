use kmdual::coxeter::{CosetKind, CosetSide};
use kmdual::hecke::{cache, hom_pairing, Flavor, HeckeElement, KlBasis, ParabolicModule};
use serde_json::json;

use super::{poly_json, with, CmdResult, Context};
use crate::args::{BasisArg, FlavorArg, KlArgs, MultArgs, PairingArgs, ParabolicKlArgs};
use crate::error::CliError;
use crate::output::{Cell, Report, Table};

pub fn kl(args: &KlArgs) -> CmdResult {
    let ctx = Context::load(&args.common)?;
    let kl = ctx.kl();
    let table = cache::load_or_compute(&kl, args.max_length, &args.cache_dir)?;
    let violations = table.invariant_violations(&ctx.group);
    let mut out = Table::new(&["u", "w", "P"]);
    let mut entries = Vec::new();
    for ((u, w), p) in &table.entries {
        out.push(vec![Cell::word(u.word()), Cell::word(w.word()), Cell::poly(p, "q")]);
        let top = p.max_degree().unwrap_or(0).max(0);
        let coeffs: Vec<i64> = (0..=top).map(|k| p.coeff(k)).collect();
        entries.push(json!({ "u": u.word(), "w": w.word(), "p": coeffs }));
    }
    let json = with(
        ctx.header(),
        json!({
            "convention": table.provenance.convention,
            "max_length": args.max_length,
            "entries": entries,
            "violations": violations,
        }),
    );
    Ok((Report::new(json, out), violations.is_empty()))
}

fn element_in(ctx: &Context, kl: &KlBasis, text: &str, basis: BasisArg) -> Result<HeckeElement, CliError> {
    let alg = kl.algebra();
    Ok(match basis {
        BasisArg::Standard => alg.standard(ctx.element(text)?),
        BasisArg::Kl => kl.b(&ctx.element(text)?),
        BasisArg::Bs => alg.bott_samelson(&ctx.word(text)?),
    })
}

fn basis_name(basis: BasisArg) -> &'static str {
    match basis {
        BasisArg::Standard => "standard",
        BasisArg::Kl => "kl",
        BasisArg::Bs => "bs",
    }
}

pub fn mult(args: &MultArgs) -> CmdResult {
    let ctx = Context::load(&args.common)?;
    let kl = ctx.kl();
    let x = kl.to_standard(&element_in(&ctx, &kl, &args.x, args.basis)?);
    let y = kl.to_standard(&element_in(&ctx, &kl, &args.y, args.basis)?);
    let product = kl.algebra().mult(&x, &y);
    // products of self-dual elements are read in the KL basis
    let (product, result_basis) = match args.basis {
        BasisArg::Standard => (product, "standard"),
        BasisArg::Kl | BasisArg::Bs => (kl.to_kl(&product), "kl"),
    };
    let mut table = Table::new(&["w", "coefficient"]);
    let mut terms = Vec::new();
    for (w, p) in product.terms() {
        table.push(vec![Cell::word(w.word()), Cell::poly(p, "v")]);
        terms.push(json!({ "w": w.word(), "coefficient": poly_json(p, "v") }));
    }
    let json = with(
        ctx.header(),
        json!({
            "basis": basis_name(args.basis),
            "x": ctx.word(&args.x)?,
            "y": ctx.word(&args.y)?,
            "result_basis": result_basis,
            "terms": terms,
        }),
    );
    Ok((Report::new(json, table), true))
}

pub fn pairing(args: &PairingArgs) -> CmdResult {
    let ctx = Context::load(&args.common)?;
    let kl = ctx.kl();
    let x = element_in(&ctx, &kl, &args.x, args.basis)?;
    let y = element_in(&ctx, &kl, &args.y, args.basis)?;
    let p = hom_pairing(&kl, &x, &y);
    let (xw, yw) = (ctx.word(&args.x)?, ctx.word(&args.y)?);
    let mut table = Table::new(&["x", "y", "pairing"]);
    table.push(vec![Cell::word(&xw), Cell::word(&yw), Cell::poly(&p, "v")]);
    let json = with(
        ctx.header(),
        json!({ "basis": basis_name(args.basis), "x": xw, "y": yw, "pairing": poly_json(&p, "v") }),
    );
    Ok((Report::new(json, table), true))
}

pub fn parabolic_kl(args: &ParabolicKlArgs) -> CmdResult {
    let ctx = Context::load(&args.common)?;
    let theta = ctx.theta(&args.theta)?;
    let flavor = match args.flavor {
        FlavorArg::Spherical => Flavor::Spherical,
        FlavorArg::Antispherical => Flavor::Antispherical,
    };
    let module = ParabolicModule::new(ctx.kl(), theta.clone(), flavor);
    let reps = ctx.group.coset_representatives(&theta, CosetSide::Left, CosetKind::Minimal, args.max_length)?;
    let mut table = Table::new(&["u", "w", "m"]);
    let mut entries = Vec::new();
    for w in &reps {
        for u in reps.iter().filter(|u| ctx.group.bruhat_leq(u, w)) {
            let m = module.parabolic_kl(u, w)?;
            if m.is_zero() {
                continue;
            }
            table.push(vec![Cell::word(u.word()), Cell::word(w.word()), Cell::poly(&m, "q")]);
            entries.push(json!({ "u": u.word(), "w": w.word(), "m": poly_json(&m, "q") }));
        }
    }
    let json = with(
        ctx.header(),
        json!({
            "theta": theta.generators(),
            "flavor": flavor,
            "max_length": args.max_length,
            "entries": entries,
        }),
    );
    Ok((Report::new(json, table), true))
}
