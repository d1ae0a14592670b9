use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tensor_spectra::boolean_flat::ProductRing;
use tensor_spectra::idealcalc::freemod::SmallRing;
use tensor_spectra::scalars::{fmt_rational, parse_rational, Rational};
use tensor_spectra::symgroup::Partition;
use tensor_spectra::wbcat::Word;

#[derive(Parser, Debug)]
#[command(name = "tsc", version, about = "Exact tensor-ideal and spectrum computations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Cache directory; falls back to TSC_CACHE_DIR, otherwise nothing is cached.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Ignore the cache entirely.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Recompute and fail if a cached payload differs.
    #[arg(long, global = true)]
    pub verify: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

/// A loop value: `generic` or a rational number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TArg {
    Generic,
    At(Rational),
}

impl FromStr for TArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.trim().eq_ignore_ascii_case("generic") {
            Ok(TArg::Generic)
        } else {
            parse_rational(s).map(TArg::At).map_err(|e| e.to_string())
        }
    }
}

impl std::fmt::Display for TArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TArg::Generic => write!(f, "generic"),
            TArg::At(r) => write!(f, "{}", fmt_rational(r)),
        }
    }
}

/// The pair `p,q` of `F(p|q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PQ {
    pub p: usize,
    pub q: usize,
}

impl FromStr for PQ {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match parts.as_slice() {
            [p, q] => Ok(PQ {
                p: p.parse().map_err(|_| format!("bad p in {s:?}"))?,
                q: q.parse().map_err(|_| format!("bad q in {s:?}"))?,
            }),
            _ => Err(format!("expected p,q but got {s:?}")),
        }
    }
}

fn word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e: tensor_spectra::Error| e.to_string())
}

fn partition(s: &str) -> Result<Partition, String> {
    s.parse().map_err(|e: tensor_spectra::Error| e.to_string())
}

fn product_ring(s: &str) -> Result<ProductRing, String> {
    s.parse().map_err(|e: tensor_spectra::Error| e.to_string())
}

fn small_ring(s: &str) -> Result<SmallRing, String> {
    s.parse().map_err(|e: tensor_spectra::Error| e.to_string())
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List the diagram basis of Hom(word, coword).
    Hom {
        #[arg(long, value_parser = word)]
        word: Word,
        /// Target word; defaults to the source.
        #[arg(long, value_parser = word)]
        coword: Option<Word>,
    },
    /// Gram matrix of the trace pairing on Hom(word, coword).
    Gram {
        #[arg(long, value_parser = word)]
        word: Word,
        #[arg(long, value_parser = word)]
        coword: Option<Word>,
        #[arg(long, default_value = "generic")]
        t: TArg,
    },
    /// Trace radical, chain primes and tensor-nilpotents of L_Q(n).
    Radical {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 2)]
        max_r: usize,
        #[arg(long, default_value_t = 2)]
        max_word_len: usize,
        #[arg(long, default_value_t = 2)]
        max_power: usize,
    },
    /// Kernel of the evaluation functor F(p|q) at t = p - q.
    Kernel {
        #[arg(long)]
        kernel: PQ,
        /// A single Hom pair; without it the whole window is computed.
        #[arg(long, value_parser = word)]
        word: Option<Word>,
        #[arg(long, value_parser = word)]
        coword: Option<Word>,
        #[arg(long, default_value_t = 2)]
        max_word_len: usize,
    },
    /// The chain of primes M(0) > M(1) > ... of L_Q(n).
    Chain {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 1)]
        max_r: usize,
        #[arg(long, default_value_t = 2)]
        max_word_len: usize,
    },
    /// Whether the Schur functor of a partition kills L modulo an ideal.
    Schur {
        #[arg(long, value_parser = partition)]
        lambda: Partition,
        /// The prime P(p|q); without it the trace radical at t is used.
        #[arg(long)]
        kernel: Option<PQ>,
        #[arg(long, allow_hyphen_values = true)]
        t: TArg,
    },
    /// Boolean algebras of idempotents.
    Boolean {
        #[command(subcommand)]
        action: BooleanAction,
    },
    /// Serre tensor ideals of the category of projective modules over a product of fields.
    Projcat {
        #[arg(long, value_parser = product_ring)]
        ring: ProductRing,
    },
    /// Spectrum of finitely generated free modules over a small ring.
    Spec {
        #[arg(long, value_parser = small_ring)]
        ring: SmallRing,
        /// Random matrices sampled per integrality check.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Patch (constructible) topology of a spectral space.
    Patch {
        /// `omega-chain` or `poset:a<b,a<c`.
        #[arg(long)]
        space: String,
        /// A point set to test for closedness, e.g. `{0,2}` or `N-{0}+inf`.
        #[arg(long)]
        set: Option<String>,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum BooleanAction {
    /// Orthogonalize a generating family, e.g. `--gens "1,2;2,3"`.
    Orth {
        #[arg(long)]
        atoms: usize,
        #[arg(long)]
        gens: String,
    },
    /// Ideals of a product of fields and their idempotents.
    Ideals {
        #[arg(long, value_parser = product_ring)]
        ring: ProductRing,
    },
}
