use std::path::PathBuf;

use clap::{Args, ValueEnum};
use littlewood::forms::{
    construct_l_on, construct_t_on, random_form, Domain, Entries, MultilinearForm,
};
use littlewood::interp::Variant;

use crate::commands::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "L", alias = "l")]
    L,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    #[value(name = "T", alias = "t")]
    T,
    #[value(name = "L", alias = "l")]
    L,
    File,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Pos1,
    Pos2,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Pos1 => Variant::Pos1,
            VariantArg::Pos2 => Variant::Pos2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVariant {
    Pos1,
    Pos2,
    Both,
}

impl SweepVariant {
    pub fn variants(self) -> Vec<Variant> {
        match self {
            SweepVariant::Pos1 => vec![Variant::Pos1],
            SweepVariant::Pos2 => vec![Variant::Pos2],
            SweepVariant::Both => vec![Variant::Pos1, Variant::Pos2],
        }
    }
}

/// Where a command's form comes from.
#[derive(Args, Debug)]
pub struct FormArgs {
    #[arg(long, value_enum)]
    pub form: Source,
    /// Arity for `T` and `L`.
    #[arg(long)]
    pub m: Option<usize>,
    /// Full 2^(m-1) dimension in every slot for `T` and `L`.
    #[arg(long)]
    pub full: bool,
    /// JSON form file, as written by `construct`.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Comma-separated dimensions for `random`.
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `pm1` for ±1 entries or an inclusive integer range `a..b`.
    #[arg(long, default_value = "pm1", allow_hyphen_values = true)]
    pub entries: String,
}

fn parse_dims(s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Failure::config(format!("invalid dimension {t:?}")))
        })
        .collect()
}

pub fn parse_entries(s: &str) -> Result<Entries, Failure> {
    if s == "pm1" {
        return Ok(Entries::Signs);
    }
    let bad = || Failure::config(format!("invalid --entries {s:?}: expected pm1 or a..b"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo = lo.trim().parse::<i64>().map_err(|_| bad())?;
    let hi = hi.trim().parse::<i64>().map_err(|_| bad())?;
    Ok(Entries::Range { lo, hi })
}

pub fn family_form(family: Family, m: usize, full: bool) -> Result<MultilinearForm, Failure> {
    let domain = if full { Domain::Full } else { Domain::Reduced };
    let form = match family {
        Family::T => construct_t_on(m, domain),
        Family::L => construct_l_on(m, domain),
    };
    form.map_err(Failure::from)
}

impl FormArgs {
    /// Short description used in reports.
    pub fn label(&self) -> String {
        match self.form {
            Source::T => format!("T_{}", self.m.unwrap_or(0)),
            Source::L => format!("L_{}", self.m.unwrap_or(0)),
            Source::File => format!(
                "file:{}",
                self.file
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default()
            ),
            Source::Random => format!(
                "random(dims={},seed={},entries={})",
                self.dims.as_deref().unwrap_or(""),
                self.seed,
                self.entries
            ),
        }
    }

    pub fn load(&self) -> Result<MultilinearForm, Failure> {
        let need_m = || {
            self.m
                .ok_or_else(|| Failure::config("--m is required for --form T and --form L"))
        };
        match self.form {
            Source::T => family_form(Family::T, need_m()?, self.full),
            Source::L => family_form(Family::L, need_m()?, self.full),
            Source::File => {
                let path = self
                    .file
                    .as_ref()
                    .ok_or_else(|| Failure::config("--file is required for --form file"))?;
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::config(format!("cannot read {}: {e}", path.display())))?;
                MultilinearForm::from_json(&text).map_err(Failure::from)
            }
            Source::Random => {
                let dims = self
                    .dims
                    .as_deref()
                    .ok_or_else(|| Failure::config("--dims is required for --form random"))?;
                let dims = parse_dims(dims)?;
                random_form(&dims, self.seed, parse_entries(&self.entries)?).map_err(Failure::from)
            }
        }
    }
}
