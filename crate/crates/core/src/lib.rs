//! Symbolic analysis of sociable interfaces.
//!
//! An interface owns local variables, shares global variables with its
//! peers, and reacts to actions: output commands say how it may update the
//! globals when it emits an action, input commands say which updates by
//! others it accepts. The crate compiles interfaces written in the `.si`
//! guarded-command language to decision diagrams and offers three
//! operations on them:
//!
//! * [`compose::compose`] — optimistic composition, pruned to the states
//!   from which some environment avoids every rejected emission;
//! * [`refine::refines`] — refinement by alternating simulation;
//! * [`safety::check`] — invariant checking against the worst
//!   ([`safety::Mode::Pessimistic`]) or the most helpful
//!   ([`safety::Mode::Optimistic`]) environment.
//!
//! ```
//! use sociable::{compose, model::Space, parse_interfaces};
//!
//! let text = "
//! module Fire:
//!   var s: [0..1]
//!   global var alarm: bool
//!   output fire { s = 0 ==> s' := 1, alarm' := true; }
//!   init: s = 0 & alarm = false
//! module Guard:
//!   var seen: bool
//!   global var alarm: bool
//!   input fire { alarm' = true ==> seen' := true; }
//!   init: seen = false & alarm = false
//! ";
//! let ifaces = parse_interfaces(text).unwrap();
//! let mut space = Space::new();
//! let both = compose::compose(&mut space, &ifaces[0], &ifaces[1]).unwrap();
//! assert!(both.interface.emits("fire") && both.interface.listens("fire"));
//! ```

pub mod cli;
pub mod compose;
pub mod emit;
pub mod game;
pub mod kernel;
pub mod model;
pub mod refine;
pub mod safety;
pub mod syntax;
pub mod trace;

use std::path::{Path, PathBuf};

use thiserror::Error;

use model::{validate, Interface, ValidationError};
use syntax::{parse_file, ModuleAst, ParseError, SourceSpan};

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Validation(#[from] ValidationError),
    #[error("{span}: duplicate module `{name}` (first defined at {first})")]
    DuplicateModule {
        name: String,
        span: SourceSpan,
        first: SourceSpan,
    },
    #[error("unknown module `{name}`; available: {}", .available.join(", "))]
    UnknownModule {
        name: String,
        available: Vec<String>,
    },
}

/// Parsed modules from one or more files.
#[derive(Debug, Clone, Default)]
pub struct Library {
    pub modules: Vec<ModuleAst>,
}

impl Library {
    pub fn from_source(text: &str, file: &str) -> Result<Self, Error> {
        let mut lib = Library::default();
        lib.add(parse_file(text, file)?)?;
        Ok(lib)
    }

    pub fn from_files<P: AsRef<Path>>(paths: &[P]) -> Result<Self, Error> {
        let mut lib = Library::default();
        for p in paths {
            let path = p.as_ref();
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.to_path_buf(),
                source,
            })?;
            lib.add(parse_file(&text, &path.display().to_string())?)?;
        }
        Ok(lib)
    }

    fn add(&mut self, modules: Vec<ModuleAst>) -> Result<(), Error> {
        for m in modules {
            if let Some(first) = self.modules.iter().find(|x| x.name.text == m.name.text) {
                return Err(Error::DuplicateModule {
                    name: m.name.text.clone(),
                    span: m.name.span.clone(),
                    first: first.name.span.clone(),
                });
            }
            self.modules.push(m);
        }
        Ok(())
    }

    pub fn module(&self, name: &str) -> Result<&ModuleAst, Error> {
        self.modules
            .iter()
            .find(|m| m.name.text == name)
            .ok_or_else(|| Error::UnknownModule {
                name: name.to_string(),
                available: self.modules.iter().map(|m| m.name.text.clone()).collect(),
            })
    }

    /// Looks up and validates one module.
    pub fn interface(&self, name: &str) -> Result<Interface, Error> {
        Ok(validate(self.module(name)?)?)
    }
}

/// Parses and validates every module of `text`.
pub fn parse_interfaces(text: &str) -> Result<Vec<Interface>, Error> {
    let lib = Library::from_source(text, "<input>")?;
    lib.modules
        .iter()
        .map(|m| validate(m).map_err(Error::from))
        .collect()
}
