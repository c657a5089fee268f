// Copyright 2026 The ncfree Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncfree::{Family, NamedLaw, Strategy};

#[derive(Debug, Parser)]
#[command(name = "ncfree", version, about = "Exact non-crossing partition combinatorics and free convolution")]
pub struct Cli {
    /// Output format; JSON unless stated otherwise per command.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Lift the desk-scale ceilings (kn <= 14 for enumeration, kN <= 12 for
    /// direct convolution) up to the library limits.
    #[arg(long, global = true)]
    pub unsafe_ceiling: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form size of a partition family.
    Count(CountArgs),
    /// Stream the members of a partition family.
    Enumerate(EnumerateArgs),
    /// Kreweras complement of a non-crossing partition.
    Kreweras(KrewerasArgs),
    /// Convolve measure specs given as JSON files (`-` reads stdin).
    Convolve(ConvolveArgs),
    /// Certified bounds on the support edge of a multiplicative power.
    Bounds(BoundsArgs),
    /// Large-k limits of dilated multiplicative powers.
    Limits(LimitsArgs),
    /// Smallest k whose power has non-negative free cumulants.
    Positivity(PositivityArgs),
    /// Run the cross-engine consistency checks. Prints one line per check
    /// unless a format is given.
    Selftest,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// nc, k-equal, k-divisible, nc21, type or pair-type.
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of blocks (k-families) or ground-set size (nc, type families).
    #[arg(long)]
    pub n: Option<usize>,
    /// Block multiplicities r_1,r_2,… for the type families.
    #[arg(long = "type", value_delimiter = ',')]
    pub block_type: Option<Vec<usize>>,
    /// Complement multiplicities b_1,b_2,… for pair-type.
    #[arg(long, value_delimiter = ',')]
    pub kr_type: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// nc, k-equal, k-divisible or nc21.
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct KrewerasArgs {
    /// Partition as `{1,3}{2}` or JSON `[[1,3],[2]]`.
    #[arg(long = "in")]
    pub input: String,
    /// Also split the complement by residues mod k.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Boxtimes,
    Boxplus,
    /// Boolean cumulants of the free multiplicative convolution.
    BooleanBoxtimes,
}

#[derive(Debug, Args)]
pub struct ConvolveArgs {
    #[arg(long, value_enum)]
    pub op: Op,
    #[arg(long)]
    pub order: usize,
    #[arg(long, default_value = "auto")]
    pub strategy: Strategy,
    #[arg(required = true)]
    pub specs: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LawSource {
    /// Named law, e.g. free-poisson, two-point:0,3/2, shifted-semicircle:1/9.
    #[arg(long, conflicts_with = "spec")]
    pub law: Option<NamedLaw>,
    /// Measure spec JSON file (`-` reads stdin).
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub source: LawSource,
    /// Number of factors.
    #[arg(long)]
    pub k: usize,
    /// Support bound; taken from the law or spec when omitted.
    #[arg(long = "L")]
    pub support_bound: Option<String>,
    /// Variance floor; taken from the law or spec when omitted.
    #[arg(long)]
    pub sigma2: Option<String>,
    /// Assert that every factor has non-negative free cumulants.
    #[arg(long)]
    pub nonneg: bool,
    /// Also report m_n^{1/n} of the k-th power for n up to this order.
    #[arg(long)]
    pub edge_order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub source: LawSource,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "10,20,50,100,200")]
    pub kgrid: Vec<usize>,
    /// Use Boolean instead of free additive powers.
    #[arg(long)]
    pub boolean: bool,
    /// Synonym for `--format`.
    #[arg(long, value_enum)]
    pub out: Option<Format>,
}

#[derive(Debug, Args)]
pub struct PositivityArgs {
    #[command(flatten)]
    pub source: LawSource,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub k_max: usize,
}
