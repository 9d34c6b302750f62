use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;

/// Parameters of a verification run. Unset fields fall back to per-suite defaults.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suites: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ms: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rings: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vars: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maxdeg: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prec_q: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prec_p: Option<u32>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

impl SuiteConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    /// Fields set in `flags` win over those in `self`.
    pub fn overridden_by(mut self, flags: SuiteConfig, seed_given: bool) -> Self {
        if !flags.suites.is_empty() {
            self.suites = flags.suites;
        }
        self.ms = flags.ms.or(self.ms);
        self.rings = flags.rings.or(self.rings);
        self.vars = flags.vars.or(self.vars);
        self.maxdeg = flags.maxdeg.or(self.maxdeg);
        self.prec_q = flags.prec_q.or(self.prec_q);
        self.prec_p = flags.prec_p.or(self.prec_p);
        self.trials = flags.trials.or(self.trials);
        if seed_given {
            self.seed = flags.seed;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win() {
        let file: SuiteConfig =
            serde_json::from_str(r#"{"suites": ["ke"], "ms": [2, 4], "seed": 7, "trials": 5}"#).unwrap();
        let flags = SuiteConfig { ms: Some(vec![3]), seed: 1, ..SuiteConfig::default() };
        let merged = file.clone().overridden_by(flags.clone(), false);
        assert_eq!(
            (merged.suites, merged.ms, merged.seed, merged.trials),
            (vec!["ke".to_string()], Some(vec![3]), 7, Some(5))
        );
        assert_eq!(file.overridden_by(flags, true).seed, 1);
        assert!(serde_json::from_str::<SuiteConfig>(r#"{"bogus": 1}"#).is_err());
    }
}
