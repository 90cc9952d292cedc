//! Report types. Field order here is the field order in the JSON output.
//!
//! Party indices are 1-based. Eigenvalue labels are `[k, r]` pairs meaning
//! `e^{2 pi i k / r}` in lowest terms.

use boundstab::RootOfUnity;
use serde::Serialize;

pub const FORMAT: &str = "boundstab-report/1";

#[derive(Serialize)]
pub struct Report<R> {
    pub format: &'static str,
    pub tool: Tool,
    pub command: &'static str,
    /// Absent for the catalog listing.
    pub input: Option<InputEcho>,
    pub seed: u64,
    pub result: R,
}

#[derive(Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for Tool {
    fn default() -> Self {
        Tool {
            name: "boundstab",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Serialize)]
pub struct InputEcho {
    /// `catalog` or `file`.
    pub source: &'static str,
    pub name: String,
    pub dims: Vec<usize>,
    pub generators: Vec<String>,
    pub partitions: Vec<NamedPartition>,
}

#[derive(Serialize)]
pub struct NamedPartition {
    pub name: String,
    pub partition: String,
}

#[derive(Serialize)]
pub struct PartitionSeparability {
    pub name: String,
    pub partition: String,
    pub separable: bool,
}

#[derive(Serialize)]
pub struct Analysis {
    pub sites: usize,
    pub total_dimension: u64,
    pub phase_modulus: u64,
    pub generators: Vec<GeneratorInfo>,
    pub group: GroupInfo,
    pub partitions: Vec<PartitionSeparability>,
}

#[derive(Serialize)]
pub struct GeneratorInfo {
    pub index: usize,
    pub word: String,
    pub order: u64,
    /// Per-site orders of the word's factors.
    pub site_orders: Vec<u64>,
    /// Every `order`-th root of unity occurs with this multiplicity.
    pub eigenvalue_multiplicity: u64,
}

#[derive(Serialize)]
pub struct GroupInfo {
    pub size: usize,
    pub tuple_count: usize,
    pub phase_collision: bool,
    pub subspace_dimension: u64,
    pub complete: bool,
    pub sector_count: Option<u64>,
}

#[derive(Serialize)]
pub struct Certification {
    /// `certified_ube` or `not_certified`.
    pub verdict: &'static str,
    pub failed: Vec<&'static str>,
    pub condition1: Vec<PairEntry>,
    pub condition2: Vec<UnlockEntry>,
    pub revalidated: bool,
    pub partitions: Vec<PartitionSeparability>,
}

#[derive(Serialize)]
pub struct PairEntry {
    pub pair: [usize; 2],
    pub witness: Option<String>,
}

#[derive(Serialize)]
pub struct UnlockEntry {
    pub partition: String,
    pub unlock_block: Vec<usize>,
}

#[derive(Serialize)]
pub struct Decomposition {
    pub tolerance: f64,
    pub sectors: usize,
    pub sector_dimension: u64,
    pub trace_error: f64,
    pub orthogonality_defect: f64,
    pub completeness_defect: f64,
    pub idempotence_defect: f64,
    pub hermiticity_defect: f64,
    pub verified: bool,
    pub partitions: Vec<SeparableFormCheck>,
}

#[derive(Serialize)]
pub struct SeparableFormCheck {
    pub name: String,
    pub partition: String,
    pub separable: bool,
    /// Largest entry of `rho_S` minus the explicit product-state mixture;
    /// separable partitions only.
    pub deviation: Option<f64>,
    /// No product state lies in the stabilized subspace; inseparable
    /// partitions only.
    pub product_state_excluded: Option<bool>,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct Unlock {
    pub partition: String,
    pub unlock_block: Vec<usize>,
    pub measuring_blocks: Vec<Vec<usize>>,
    /// `sampled` or `exhaustive`.
    pub mode: &'static str,
    pub shots: usize,
    pub summary: UnlockSummary,
    pub outcomes: Vec<OutcomeTally>,
    pub records: Vec<RecordEntry>,
}

#[derive(Serialize)]
pub struct UnlockSummary {
    pub records: usize,
    pub distinct_outcomes: usize,
    pub min_purity: f64,
    pub all_genuine: bool,
    pub label_law: bool,
    pub equality: bool,
    pub product: bool,
    /// `null` when some label is not a sign.
    pub xor: Option<bool>,
    pub verified: bool,
}

#[derive(Serialize)]
pub struct OutcomeTally {
    /// Basis index per measuring block.
    pub outcome: Vec<usize>,
    pub labels: Vec<Vec<RootOfUnity>>,
    pub residual_labels: Vec<RootOfUnity>,
    pub count: usize,
    pub probability: f64,
}

#[derive(Serialize)]
pub struct RecordEntry {
    pub shot: Option<usize>,
    pub outcomes: Vec<BlockEntry>,
    pub probability: f64,
    pub purity: f64,
    pub genuine: bool,
    pub residual_labels: Vec<RootOfUnity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<Vec<[f64; 2]>>,
}

#[derive(Serialize)]
pub struct BlockEntry {
    pub block: Vec<usize>,
    pub index: usize,
    pub labels: Vec<RootOfUnity>,
}

#[derive(Serialize)]
pub struct CatalogListing {
    pub entries: Vec<&'static str>,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}
