//! Plain-text generator files.
//!
//! ```text
//! # Smolin state
//! dims: 2 2 2 2
//! X X X X
//! Z Z Z Z
//! partition pairs: 1,2|3,4
//! ```
//!
//! `#` starts a comment. The `dims:` line comes first; every other
//! non-empty line is a generator or a named partition.

use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::partition::Partition;
use crate::pauli::{parse_word, PauliWord, SystemDims};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub gens: GeneratorSet,
    pub partitions: Vec<(String, Partition)>,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

impl GeneratorSpec {
    pub fn new(gens: GeneratorSet) -> Self {
        GeneratorSpec {
            gens,
            partitions: Vec::new(),
        }
    }

    pub fn with_partition(mut self, name: &str, text: &str) -> Result<Self> {
        let p = Partition::parse(self.gens.n_sites(), text)?;
        self.partitions.push((name.to_string(), p));
        Ok(self)
    }

    pub fn partition(&self, name: &str) -> Option<&Partition> {
        self.partitions.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut dims: Option<SystemDims> = None;
        let mut gens: Vec<(usize, PauliWord)> = Vec::new();
        let mut partitions: Vec<(String, Partition)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let indent = content.len() - content.trim_start().len();
            let body = content.trim();
            if body.is_empty() {
                continue;
            }
            let col0 = raw[..indent].chars().count() + 1;
            if let Some(rest) = body.strip_prefix("dims:") {
                if dims.is_some() {
                    return Err(err(line_no, col0, "duplicate dims line"));
                }
                let mut values = Vec::new();
                let mut offset = 0;
                for tok in rest.split_whitespace() {
                    let at = rest[offset..].find(tok).unwrap() + offset;
                    offset = at + tok.len();
                    let column = col0 + "dims:".len() + rest[..at].chars().count();
                    values.push(
                        tok.parse::<usize>()
                            .map_err(|_| err(line_no, column, format!("bad dimension '{tok}'")))?,
                    );
                }
                dims = Some(SystemDims::new(values).map_err(|e| err(line_no, col0, e.to_string()))?);
                continue;
            }
            let Some(d) = &dims else {
                return Err(err(line_no, col0, "expected 'dims:' before generators"));
            };
            if let Some(rest) = body.strip_prefix("partition") {
                let Some((name, syntax)) = rest.split_once(':') else {
                    return Err(err(line_no, col0, "expected 'partition <name>: <blocks>'"));
                };
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(err(line_no, col0, "partition name must be one word"));
                }
                if partitions.iter().any(|(n, _)| n == name) {
                    return Err(err(line_no, col0, format!("duplicate partition '{name}'")));
                }
                let column = col0 + body.find(':').unwrap() + 1;
                let p = Partition::parse(d.len(), syntax).map_err(|e| err(line_no, column, e.to_string()))?;
                partitions.push((name.to_string(), p));
                continue;
            }
            let w = parse_word(d, body, line_no, col0)?;
            if !w.is_gprime() {
                return Err(err(
                    line_no,
                    col0,
                    format!("generator {} mixes X and Z on one site", gens.len() + 1),
                ));
            }
            for (j, (_, prev)) in gens.iter().enumerate() {
                let c = prev.commutator_exponent_full(&w)?;
                if c != 0 {
                    return Err(err(
                        line_no,
                        col0,
                        format!(
                            "generators {} and {} do not commute (commutator exponent {c} of {})",
                            j + 1,
                            gens.len() + 1,
                            d.phase_modulus()
                        ),
                    ));
                }
            }
            gens.push((line_no, w));
        }
        let dims = dims.ok_or_else(|| err(1, 1, "missing 'dims:' line"))?;
        let gens = GeneratorSet::new(dims, gens.into_iter().map(|(_, w)| w).collect())?;
        Ok(GeneratorSpec { gens, partitions })
    }

    /// Canonical text form; `parse(format(s)) == s`.
    pub fn format(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.gens.dims().dims().iter().map(|d| d.to_string()).collect();
        writeln!(f, "dims: {}", dims.join(" "))?;
        for g in self.gens.gens() {
            writeln!(f, "{g}")?;
        }
        for (name, p) in &self.partitions {
            writeln!(f, "partition {name}: {p}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smolin_file() {
        let spec =
            GeneratorSpec::parse("# Smolin\ndims: 2 2 2 2\nX X X X\nZ Z Z Z\npartition pairs: 1,2|3,4\n").unwrap();
        assert_eq!(spec.gens.len(), 2);
        assert_eq!(spec.partition("pairs").unwrap().to_string(), "1,2|3,4");
        assert_eq!(GeneratorSpec::parse(&spec.format()).unwrap(), spec);
    }

    #[test]
    fn empty_generator_section_is_trivial() {
        let spec = GeneratorSpec::parse("dims: 3 3\n").unwrap();
        assert!(spec.gens.is_empty());
    }

    #[test]
    fn errors_are_anchored() {
        let e = GeneratorSpec::parse("dims: 2 2\nX Q\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                column: 3,
                message: "unrecognized site token 'Q'".into()
            }
        );
        let e = GeneratorSpec::parse("dims: 2 2\nX X\nZ I\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
        assert!(e.to_string().contains("generators 1 and 2"));
        let e = GeneratorSpec::parse("dims: 2 2\nXZ X\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = GeneratorSpec::parse("X X\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = GeneratorSpec::parse("dims: 2 2\nX X X\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 5, .. }));
        let e = GeneratorSpec::parse("dims: 2 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, column: 9, .. }), "{e:?}");
        let e = GeneratorSpec::parse("dims: 2 2\npartition p: 1|3\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
    }
}
