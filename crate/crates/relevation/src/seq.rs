//! Sequences of lifetime distributions.
//!
//! A relevation or replacement policy consumes one distribution per arrival:
//! the `n`-th failure is governed by entry `n`. Finite entry lists are
//! extended by repeating the last entry, by cycling, or not at all, in which
//! case indexing past the end is an error.

use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use crate::dist::LifetimeDistribution;
use crate::error::{Error, Result};

/// How a finite entry list supplies distributions past its end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtendRule {
    /// Entry `n` past the end resolves to the last entry.
    RepeatLast,
    /// Entries wrap around.
    Cycle,
    /// Indexing past the end is a hard error.
    Finite,
}

/// A nonempty list of lifetime distributions with an extension rule.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSequence {
    entries: Vec<LifetimeDistribution>,
    extend: ExtendRule,
}

#[derive(Deserialize)]
struct SequenceConfig {
    entries: Vec<String>,
    #[serde(default)]
    extend: Option<String>,
}

impl DistributionSequence {
    pub fn new(entries: Vec<LifetimeDistribution>, extend: ExtendRule) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Domain("a distribution sequence needs at least one entry".into()));
        }
        Ok(Self { entries, extend })
    }

    /// Sequence that uses the same distribution for every arrival.
    pub fn iid(d: LifetimeDistribution) -> Self {
        Self { entries: vec![d], extend: ExtendRule::RepeatLast }
    }

    /// Distribution governing arrival `n` (1-based).
    pub fn entry(&self, n: usize) -> Result<&LifetimeDistribution> {
        if n == 0 {
            return Err(Error::Domain("arrival indices are 1-based".into()));
        }
        let len = self.entries.len();
        let slot = match self.extend {
            ExtendRule::RepeatLast => (n - 1).min(len - 1),
            ExtendRule::Cycle => (n - 1) % len,
            ExtendRule::Finite => {
                if n > len {
                    return Err(Error::SequenceExhausted { index: n, len });
                }
                n - 1
            }
        };
        Ok(&self.entries[slot])
    }

    pub fn entries(&self) -> &[LifetimeDistribution] {
        &self.entries
    }

    pub fn extend_rule(&self) -> ExtendRule {
        self.extend
    }

    /// True when every arrival sees the same distribution.
    pub fn is_iid(&self) -> bool {
        self.entries.iter().all(|d| d == &self.entries[0])
    }

    /// Last explicitly listed entry; its upper quantile anchors default
    /// evaluation grids.
    pub fn last_entry(&self) -> &LifetimeDistribution {
        self.entries.last().expect("sequence entries are nonempty")
    }

    /// Parses the JSON configuration form, e.g.
    /// `{"entries": ["gamma:shape=2,scale=1"], "extend": "repeat_last"}`.
    /// The `extend` field is optional and defaults to `repeat_last`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let config: SequenceConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
            token: text.chars().take(60).collect(),
            expected: format!("a sequence config object ({e})"),
        })?;
        let extend = match config.extend.as_deref() {
            None | Some("repeat_last") => ExtendRule::RepeatLast,
            Some("cycle") => ExtendRule::Cycle,
            Some(other) => {
                return Err(Error::Parse {
                    token: other.to_string(),
                    expected: "`repeat_last` or `cycle`".into(),
                })
            }
        };
        let entries = config
            .entries
            .iter()
            .map(|s| LifetimeDistribution::from_str(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries, extend)
    }

    /// Short text form used in output labels.
    pub fn label(&self) -> String {
        if self.entries.len() == 1 {
            return self.entries[0].to_string();
        }
        let joined: Vec<String> = self.entries.iter().map(|d| d.to_string()).collect();
        let rule = match self.extend {
            ExtendRule::RepeatLast => "repeat_last",
            ExtendRule::Cycle => "cycle",
            ExtendRule::Finite => "finite",
        };
        format!("[{};{rule}]", joined.join("|"))
    }
}

impl fmt::Display for DistributionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}
