mod bimod;
mod duality;
mod group;
mod hecke;
mod parabolic;

use std::path::Path;
use std::sync::Arc;

use kmdual::coxeter::parse_word;
use kmdual::hecke::{HeckeAlgebra, KlBasis};
use kmdual::{LaurentPoly, ParabolicSubset, Realization, WeylElement, WeylGroup};
use serde_json::{json, Value};

use crate::args::{Command, Common};
use crate::error::CliError;
use crate::output::Report;

pub type CmdResult = Result<(Report, bool), CliError>;

/// Rendered output and whether every check passed.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

pub fn run(command: Command) -> Result<Outcome, CliError> {
    let (common, result) = match &command {
        Command::Group(a) => (&a.common, group::run(a)),
        Command::Kl(a) => (&a.common, hecke::kl(a)),
        Command::Mult(a) => (&a.common, hecke::mult(a)),
        Command::Pairing(a) => (&a.common, hecke::pairing(a)),
        Command::ParabolicKl(a) => (&a.common, hecke::parabolic_kl(a)),
        Command::Bimod { command } => bimod::run(command),
        Command::Duality { command } => duality::run(command),
        Command::Parabolic { command } => parabolic::run(command),
    };
    let (report, passed) = result?;
    Ok(Outcome { text: report.render(common.format()), passed })
}

/// Group data loaded from the `--type` document.
pub struct Context {
    pub realization: Arc<Realization>,
    pub group: Arc<WeylGroup>,
}

impl Context {
    pub fn load(common: &Common) -> Result<Self, CliError> {
        Self::from_path(&common.gcm)
    }

    fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let realization = Arc::new(Realization::from_json(&text)?);
        let group = Arc::new(WeylGroup::from_arc(realization.clone()));
        Ok(Context { realization, group })
    }

    pub fn word(&self, text: &str) -> Result<Vec<usize>, CliError> {
        let word = parse_word(text)?;
        for &s in &word {
            self.group.generator(s)?;
        }
        Ok(word)
    }

    pub fn element(&self, text: &str) -> Result<WeylElement, CliError> {
        Ok(self.group.from_word(&self.word(text)?)?)
    }

    pub fn theta(&self, gens: &[usize]) -> Result<ParabolicSubset, CliError> {
        Ok(self.group.parabolic(gens)?)
    }

    pub fn kl(&self) -> Arc<KlBasis> {
        Arc::new(KlBasis::new(Arc::new(HeckeAlgebra::new(self.group.clone()))))
    }

    /// Fields shared by every JSON report.
    pub fn header(&self) -> Value {
        json!({
            "cartan": self.realization.cartan.entries(),
            "gcm_hash": self.realization.gcm_hash(),
        })
    }
}

/// Laurent polynomial as text plus `[exponent, coefficient]` pairs.
pub fn poly_json(p: &LaurentPoly, var: &str) -> Value {
    json!({
        "text": p.render(var),
        "terms": p.terms().map(|(e, c)| json!([e, c])).collect::<Vec<_>>(),
    })
}

/// Merges `extra` into the object `base`.
pub fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}
