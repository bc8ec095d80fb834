//! Witness traces: a sequence of valuations, each reached by a named move.

use std::fmt;

use serde::Serialize;

use crate::kernel::Bdd;
use crate::model::{format_valuation, Space, VarDecl, VarId};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    /// The move that produced this state, e.g. `fire!` or `Fire.fire!`;
    /// `None` for the initial state.
    pub label: Option<String>,
    pub state: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    #[serde(skip)]
    pub vars: Vec<VarDecl>,
    pub steps: Vec<Step>,
    /// What goes wrong in the last state, if anything needs saying.
    pub conclusion: Option<String>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn last_state(&self) -> &[i64] {
        &self
            .steps
            .last()
            .expect("a trace has an initial state")
            .state
    }

    /// One line per step, `label: name=value ...`.
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .steps
            .iter()
            .map(|s| {
                format!(
                    "{}: {}",
                    s.label.as_deref().unwrap_or("init"),
                    format_valuation(&self.vars, &s.state)
                )
            })
            .collect();
        if let Some(c) = &self.conclusion {
            out.push(c.clone());
        }
        out
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Attaches labels to a path of states: each step gets the first label whose
/// relation contains the corresponding pair.
pub fn label_path(
    space: &mut Space,
    vars: &[VarDecl],
    ids: &[VarId],
    relations: &[(String, Bdd)],
    path: Vec<Vec<i64>>,
) -> Trace {
    let mut steps = Vec::with_capacity(path.len());
    for (i, state) in path.iter().enumerate() {
        let label = if i == 0 {
            None
        } else {
            let from = space.state_cube(ids, &path[i - 1], false);
            let to = space.state_cube(ids, state, true);
            let pair = space.manager_mut().and(from, to);
            relations
                .iter()
                .find(|(_, rel)| !space.manager_mut().and(pair, *rel).is_false())
                .map(|(label, _)| label.clone())
        };
        steps.push(Step {
            label,
            state: state.clone(),
        });
    }
    Trace {
        vars: vars.to_vec(),
        steps,
        conclusion: None,
    }
}
