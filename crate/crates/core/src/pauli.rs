//! Exact algebra of generalized Pauli words over mixed-dimension qudits.
//!
//! A word is stored as `zeta^phase * (X^x1 Z^z1) ⊗ ... ⊗ (X^xn Z^zn)` where
//! `zeta = e^{i pi / D}` and `D` is the least common multiple of the site
//! dimensions. Every per-site root of unity `omega_d = e^{2 pi i / d}` is the
//! integer power `zeta^{2D/d}`, so all phase bookkeeping stays in `Z_{2D}`.

use crate::error::{Error, Result};
use num_integer::{gcd, lcm, Integer};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Per-site dimensions of a multipartite system.
#[derive(Clone, Debug)]
pub struct SystemDims {
    dims: Arc<[usize]>,
    lcm: u64,
    total: u64,
}

impl PartialEq for SystemDims {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.dims, &other.dims) || self.dims == other.dims
    }
}
impl Eq for SystemDims {}

impl std::hash::Hash for SystemDims {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dims.hash(state)
    }
}

impl SystemDims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidDims("at least one site is required".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDims(format!("site dimension {d} is below 2")));
        }
        let mut l: u64 = 1;
        let mut total: u64 = 1;
        for &d in &dims {
            l = lcm(l, d as u64);
            total = total
                .checked_mul(d as u64)
                .ok_or_else(|| Error::InvalidDims("total dimension overflows u64".into()))?;
        }
        if l.checked_mul(2).is_none() {
            return Err(Error::InvalidDims("lcm of dimensions overflows".into()));
        }
        Ok(SystemDims {
            dims: dims.into(),
            lcm: l,
            total,
        })
    }

    /// `n` sites of dimension `d`.
    pub fn uniform(d: usize, n: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, site: usize) -> usize {
        self.dims[site]
    }

    /// `D`, the least common multiple of all site dimensions.
    pub fn lcm(&self) -> u64 {
        self.lcm
    }

    /// `N`, the dimension of the whole Hilbert space.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Phases live in `Z_{2D}`.
    pub fn phase_modulus(&self) -> u64 {
        2 * self.lcm
    }

    /// Number of `zeta` units in one `omega_{d_k}`.
    pub fn site_unit(&self, site: usize) -> u64 {
        self.phase_modulus() / self.dims[site] as u64
    }

    /// Dimensions of the listed sites, in the order given.
    pub fn subsystem(&self, sites: &[usize]) -> Result<SystemDims> {
        check_sites(self.len(), sites)?;
        SystemDims::new(sites.iter().map(|&s| self.dims[s]).collect())
    }

    /// Product of the dimensions of the listed sites.
    pub fn sub_total(&self, sites: &[usize]) -> u64 {
        sites.iter().map(|&s| self.dims[s] as u64).product()
    }
}

impl fmt::Display for SystemDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Validates a nonempty, in-range, duplicate-free site list.
pub(crate) fn check_sites(n: usize, sites: &[usize]) -> Result<()> {
    if sites.is_empty() {
        return Err(Error::InvalidSites("empty site set".into()));
    }
    let mut seen = vec![false; n];
    for &s in sites {
        if s >= n {
            return Err(Error::InvalidSites(format!(
                "site {} out of range for {n} sites",
                s + 1
            )));
        }
        if seen[s] {
            return Err(Error::InvalidSites(format!("site {} repeated", s + 1)));
        }
        seen[s] = true;
    }
    Ok(())
}

/// An exact root of unity `e^{2 pi i num / den}` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[u64; 2]", from = "[u64; 2]")]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl From<RootOfUnity> for [u64; 2] {
    fn from(r: RootOfUnity) -> Self {
        [r.num, r.den]
    }
}

impl From<[u64; 2]> for RootOfUnity {
    fn from(v: [u64; 2]) -> Self {
        RootOfUnity::new(v[0], v[1].max(1))
    }
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { num: 0, den: 1 };

    /// `e^{2 pi i k / n}`.
    pub fn new(k: u64, n: u64) -> Self {
        assert!(n > 0, "root of unity needs a positive order");
        let k = k % n;
        let g = gcd(k, n);
        if k == 0 {
            return Self::ONE;
        }
        RootOfUnity { num: k / g, den: n / g }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    /// Multiplicative order.
    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 0
    }

    pub fn inv(self) -> RootOfUnity {
        RootOfUnity::new(self.den - self.num, self.den)
    }

    /// Exponent `k` such that this equals `e^{2 pi i k / n}`, if any.
    pub fn exponent_in(&self, n: u64) -> Option<u64> {
        if n.is_multiple_of(self.den) {
            Some(self.num * (n / self.den))
        } else {
            None
        }
    }

    pub fn angle(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.num as f64 / self.den as f64
    }

    /// Nearest `n`-th root of unity to the unit complex number `(re, im)`.
    pub fn nearest(re: f64, im: f64, n: u64) -> RootOfUnity {
        let turns = im.atan2(re) / (2.0 * std::f64::consts::PI);
        let k = (turns * n as f64).round().rem_euclid(n as f64) as u64;
        RootOfUnity::new(k, n)
    }
}

impl std::ops::Mul for RootOfUnity {
    type Output = RootOfUnity;

    fn mul(self, other: RootOfUnity) -> RootOfUnity {
        let n = lcm(self.den, other.den);
        RootOfUnity::new(self.num * (n / self.den) + other.num * (n / other.den), n)
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "1"),
            (1, 2) => write!(f, "-1"),
            (k, n) => write!(f, "e^(2πi·{k}/{n})"),
        }
    }
}

/// A generalized Pauli operator in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliWord {
    dims: SystemDims,
    phase: u64,
    sites: Vec<(usize, usize)>,
}

impl PauliWord {
    pub fn identity(dims: &SystemDims) -> Self {
        PauliWord {
            dims: dims.clone(),
            phase: 0,
            sites: vec![(0, 0); dims.len()],
        }
    }

    /// Builds a word from per-site `(x, z)` exponents, reducing everything.
    pub fn new(dims: &SystemDims, phase: u64, sites: Vec<(usize, usize)>) -> Result<Self> {
        if sites.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} site exponents for {} sites",
                sites.len(),
                dims.len()
            )));
        }
        let sites = sites
            .into_iter()
            .zip(dims.dims())
            .map(|((x, z), &d)| (x % d, z % d))
            .collect();
        Ok(PauliWord {
            dims: dims.clone(),
            phase: phase % dims.phase_modulus(),
            sites,
        })
    }

    /// Tensor product of pure powers: `X^e` where `x_mask` is set, `Z^e` elsewhere.
    pub fn from_exponents(dims: &SystemDims, xs: &[usize], zs: &[usize]) -> Result<Self> {
        if xs.len() != zs.len() {
            return Err(Error::DimensionMismatch("x and z exponent lists differ".into()));
        }
        Self::new(dims, 0, xs.iter().copied().zip(zs.iter().copied()).collect())
    }

    /// `X^a` on `site`, identity elsewhere.
    pub fn x_on(dims: &SystemDims, site: usize, a: usize) -> Self {
        let mut w = Self::identity(dims);
        w.sites[site].0 = a % dims.dim(site);
        w
    }

    /// `Z^b` on `site`, identity elsewhere.
    pub fn z_on(dims: &SystemDims, site: usize, b: usize) -> Self {
        let mut w = Self::identity(dims);
        w.sites[site].1 = b % dims.dim(site);
        w
    }

    pub fn dims(&self) -> &SystemDims {
        &self.dims
    }

    /// Exponent of `zeta = e^{i pi / D}`.
    pub fn phase(&self) -> u64 {
        self.phase
    }

    pub fn sites(&self) -> &[(usize, usize)] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// All site exponents vanish (the phase may not).
    pub fn is_scalar(&self) -> bool {
        self.sites.iter().all(|&(x, z)| x == 0 && z == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.is_scalar()
    }

    /// Same operator word with the phase dropped.
    pub fn without_phase(&self) -> PauliWord {
        PauliWord {
            phase: 0,
            ..self.clone()
        }
    }

    /// Multiplies by `zeta^c`.
    pub fn phase_shifted(&self, c: u64) -> PauliWord {
        PauliWord {
            phase: (self.phase + c) % self.dims.phase_modulus(),
            ..self.clone()
        }
    }

    /// Member of `G'`: phase-free and each site a pure X-power or Z-power.
    pub fn is_gprime(&self) -> bool {
        self.phase == 0 && self.sites.iter().all(|&(x, z)| x == 0 || z == 0)
    }

    fn same_dims(&self, other: &PauliWord) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("[{}] vs [{}]", self.dims, other.dims)));
        }
        Ok(())
    }

    /// Operator product `self * other`, normal-ordered with `Z X = omega X Z`.
    pub fn multiply(&self, other: &PauliWord) -> Result<PauliWord> {
        self.same_dims(other)?;
        let m = self.dims.phase_modulus();
        let mut phase = (self.phase + other.phase) % m;
        let sites = self
            .sites
            .iter()
            .zip(&other.sites)
            .enumerate()
            .map(|(k, (&(xa, za), &(xb, zb)))| {
                let d = self.dims.dim(k);
                let swap = (za * xb) % d;
                phase = (phase + swap as u64 * self.dims.site_unit(k)) % m;
                ((xa + xb) % d, (za + zb) % d)
            })
            .collect();
        Ok(PauliWord {
            dims: self.dims.clone(),
            phase,
            sites,
        })
    }

    /// Exponent `c` with `a|_T b|_T = zeta^c b|_T a|_T`.
    pub fn commutator_exponent(&self, other: &PauliWord, sites: &[usize]) -> Result<u64> {
        self.same_dims(other)?;
        check_sites(self.len(), sites)?;
        Ok(sites.iter().fold(0, |acc, &k| {
            (acc + self.site_commutator(other, k)) % self.dims.phase_modulus()
        }))
    }

    /// Commutator exponent over all sites.
    pub fn commutator_exponent_full(&self, other: &PauliWord) -> Result<u64> {
        let all: Vec<usize> = (0..self.len()).collect();
        self.commutator_exponent(other, &all)
    }

    /// Per-site contribution to the commutator exponent, in `zeta` units.
    pub(crate) fn site_commutator(&self, other: &PauliWord, k: usize) -> u64 {
        let d = self.dims.dim(k) as i64;
        let (xa, za) = self.sites[k];
        let (xb, zb) = other.sites[k];
        let c = (za as i64 * xb as i64 - xa as i64 * zb as i64).rem_euclid(d);
        c as u64 * self.dims.site_unit(k)
    }

    /// Restriction to the listed sites (order-preserving), phase dropped.
    pub fn restrict(&self, sites: &[usize]) -> Result<PauliWord> {
        check_sites(self.len(), sites)?;
        if self.phase != 0 {
            return Err(Error::Precondition("restriction needs a phase-free word".into()));
        }
        let mut sorted = sites.to_vec();
        sorted.sort_unstable();
        let dims = self.dims.subsystem(&sorted)?;
        Ok(PauliWord {
            dims,
            phase: 0,
            sites: sorted.iter().map(|&s| self.sites[s]).collect(),
        })
    }

    /// `w^r` via `(X^a Z^b)^r = omega^{ab r(r-1)/2} X^{ar} Z^{br}`.
    pub fn power(&self, r: u64) -> PauliWord {
        let m = self.dims.phase_modulus();
        let r128 = r as u128;
        let mut phase = ((self.phase as u128 * r128) % m as u128) as u64;
        let tri = if r == 0 { 0 } else { r128 * (r128 - 1) / 2 };
        let sites = self
            .sites
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| {
                let d = self.dims.dim(k) as u128;
                let swaps = ((a as u128 * b as u128) % d) * (tri % d) % d;
                phase = (phase + (swaps as u64) * self.dims.site_unit(k)) % m;
                (((a as u128 * r128) % d) as usize, ((b as u128 * r128) % d) as usize)
            })
            .collect();
        PauliWord {
            dims: self.dims.clone(),
            phase,
            sites,
        }
    }

    /// Smallest `r >= 1` with `w^r` equal to the identity, phase included.
    pub fn order(&self) -> u64 {
        let mut l: u64 = 1;
        for (k, &(x, z)) in self.sites.iter().enumerate() {
            let d = self.dims.dim(k) as u64;
            l = l.lcm(&(d / gcd(x as u64, d))).lcm(&(d / gcd(z as u64, d)));
        }
        let scalar = self.power(l);
        debug_assert!(scalar.is_scalar());
        let m = self.dims.phase_modulus();
        let r = l * (m / gcd(scalar.phase, m));
        debug_assert!(self.power(r).is_identity());
        r
    }

    /// Eigenvalues of a `G'` word with multiplicities.
    ///
    /// A phase-free word of order `r` has `tr(w^e) = 0` for `0 < e < r`, so
    /// each `r`-th root of unity occurs exactly `N / r` times.
    pub fn spectrum(&self) -> Result<Vec<(RootOfUnity, u64)>> {
        if !self.is_gprime() {
            return Err(Error::Precondition(
                "spectrum is defined for phase-free pure X/Z-power words only".into(),
            ));
        }
        let r = self.order();
        let mult = self.dims.total() / r;
        Ok((0..r).map(|k| (RootOfUnity::new(k, r), mult)).collect())
    }

    /// Parses whitespace-separated site tokens (`I`, `X`, `Z`, `X^a`, `Z^b`).
    pub fn parse(dims: &SystemDims, text: &str) -> Result<PauliWord> {
        parse_word(dims, text, 1, 1)
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            write!(f, "ζ^{} ", self.phase)?;
        }
        for (k, &(x, z)) in self.sites.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if x == 0 && z == 0 {
                write!(f, "I")?;
                continue;
            }
            match x {
                0 => {}
                1 => write!(f, "X")?,
                a => write!(f, "X^{a}")?,
            }
            match z {
                0 => {}
                1 => write!(f, "Z")?,
                b => write!(f, "Z^{b}")?,
            }
        }
        Ok(())
    }
}

/// Parses a word located at (`line`, `col0`) in some larger text.
pub(crate) fn parse_word(dims: &SystemDims, text: &str, line: usize, col0: usize) -> Result<PauliWord> {
    let mut sites = Vec::with_capacity(dims.len());
    let mut pos = 0;
    for token in text.split_whitespace() {
        let offset = text[pos..].find(token).unwrap() + pos;
        pos = offset + token.len();
        let column = col0 + text[..offset].chars().count();
        let site = sites.len();
        if site >= dims.len() {
            return Err(Error::Parse {
                line,
                column,
                message: format!("more than {} site tokens", dims.len()),
            });
        }
        let (x, z) = parse_token(token).map_err(|message| Error::Parse { line, column, message })?;
        let d = dims.dim(site);
        sites.push((x % d, z % d));
    }
    if sites.len() != dims.len() {
        return Err(Error::Parse {
            line,
            column: col0 + text.chars().count(),
            message: format!("expected {} site tokens, found {}", dims.len(), sites.len()),
        });
    }
    Ok(PauliWord {
        dims: dims.clone(),
        phase: 0,
        sites,
    })
}

fn parse_token(token: &str) -> std::result::Result<(usize, usize), String> {
    if token == "I" {
        return Ok((0, 0));
    }
    let bytes = token.as_bytes();
    let mut i = 0;
    let mut read_part = |letter: u8| -> std::result::Result<Option<usize>, String> {
        if i >= bytes.len() || bytes[i] != letter {
            return Ok(None);
        }
        i += 1;
        if i < bytes.len() && bytes[i] == b'^' {
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(format!("missing exponent in '{token}'"));
            }
            token[start..i]
                .parse::<usize>()
                .map(Some)
                .map_err(|e| format!("bad exponent in '{token}': {e}"))
        } else {
            Ok(Some(1))
        }
    };
    let x = read_part(b'X')?;
    let z = read_part(b'Z')?;
    if i != bytes.len() || (x.is_none() && z.is_none()) {
        return Err(format!("unrecognized site token '{token}'"));
    }
    Ok((x.unwrap_or(0), z.unwrap_or(0)))
}
