//! Built-in generator sets with their named partitions.

use crate::error::{Error, Result};
use crate::group::GeneratorSet;
use crate::pauli::{PauliWord, SystemDims};
use crate::specfile::GeneratorSpec;

pub const NAMES: [&str; 5] = ["smolin4", "gsmolin", "nine_qubit", "seven_qutrit", "mixed_dim"];

fn build(dims: Vec<usize>, words: &[String], partitions: &[(&str, String)]) -> Result<GeneratorSpec> {
    let dims = SystemDims::new(dims)?;
    let gens = words
        .iter()
        .map(|w| PauliWord::parse(&dims, w))
        .collect::<Result<Vec<_>>>()?;
    let mut spec = GeneratorSpec::new(GeneratorSet::commuting(dims, gens)?);
    for (name, text) in partitions {
        spec = spec.with_partition(name, text)?;
    }
    Ok(spec)
}

/// Generalized Smolin state on `2n` qubits: `X^{(x)2n}` and `Z^{(x)2n}`.
pub fn gsmolin(n: usize) -> Result<GeneratorSpec> {
    if n < 2 {
        return Err(Error::UnknownCatalog(format!("gsmolin needs n >= 2, got {n}")));
    }
    let m = 2 * n;
    let pairs: Vec<String> = (0..n).map(|k| format!("{},{}", 2 * k + 1, 2 * k + 2)).collect();
    let mut partitions = vec![("pairs", pairs.join("|"))];
    if n == 2 {
        partitions.push(("crossed", "1,3|2,4".into()));
        partitions.push(("nested", "1,4|2,3".into()));
    }
    build(
        vec![2; m],
        &[vec!["X"; m].join(" "), vec!["Z"; m].join(" ")],
        &partitions,
    )
}

pub fn smolin4() -> Result<GeneratorSpec> {
    gsmolin(2)
}

pub fn nine_qubit() -> Result<GeneratorSpec> {
    build(
        vec![2; 9],
        &[
            "X X Z X X Z X X Z".into(),
            "X Z X X Z X X Z X".into(),
            "Z X X Z X X Z X X".into(),
        ],
        &[
            ("rows", "1,2,3|4,5,6|7,8,9".into()),
            ("mixed", "1,6,8|2,4,9|3,5,7".into()),
        ],
    )
}

pub fn seven_qutrit() -> Result<GeneratorSpec> {
    build(
        vec![3; 7],
        &["X^2 Z Z^2 X Z^2 X Z".into(), "Z X X^2 Z X^2 Z X".into()],
        &[
            ("unlock", "1,4|2,5,7|3,6".into()),
            ("separable", "1,2,3|4,5|6,7".into()),
        ],
    )
}

pub fn mixed_dim() -> Result<GeneratorSpec> {
    build(
        vec![2, 2, 4, 4, 6, 6],
        &["X Z X^2 Z X^3 Z".into(), "Z X Z X^2 Z X^3".into()],
        &[("pairs", "1,2|3,4|5,6".into()), ("unlock", "1,6|2,3|4,5".into())],
    )
}

/// Looks up `name` or `name:n` (only `gsmolin` takes a parameter).
pub fn catalog(query: &str) -> Result<GeneratorSpec> {
    let (name, param) = match query.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (query, None),
    };
    let unknown = || Error::UnknownCatalog(query.to_string());
    match (name, param) {
        ("gsmolin", p) => {
            let n = match p {
                Some(p) => p.parse::<usize>().map_err(|_| unknown())?,
                None => 2,
            };
            gsmolin(n)
        }
        (_, Some(_)) => Err(unknown()),
        ("smolin4", None) => smolin4(),
        ("nine_qubit", None) => nine_qubit(),
        ("seven_qutrit", None) => seven_qutrit(),
        ("mixed_dim", None) => mixed_dim(),
        _ => Err(unknown()),
    }
}
