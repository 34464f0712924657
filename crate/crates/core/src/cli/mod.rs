//! The `flatbound` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid group or input document,
//! 3 internal invariant violation.

mod document;
mod report;

use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand};
use serde_json::Value;

pub use document::{parse_document, BandDocument, Document, DocumentError, GeneratorDocument, GroupDocument};

use crate::bands::FlatBand;
use crate::catalog::{self, Built, Params};
use crate::error::Error;
use crate::groups::{SpaceGroup, DEFAULT_POINT_GROUP_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "flatbound", version, about = "Exact computations on Bieberbach groups and flat manifolds with geodesic boundary")]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Catalog parameter `key=value` (a, b, c, d, style); repeatable.
    #[arg(long = "param", global = true, value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Cap on point-group closure and isometry enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_POINT_GROUP_CAP)]
    cap: usize,
    /// Largest denominator tried in the witness scan (default: unlimited).
    #[arg(long = "max-denominator", global = true)]
    max_denominator: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List catalog entries.
    Catalog,
    /// Print the document of a catalog entry.
    Show { name: String },
    /// Validate a group and print its invariants.
    Check { input: String },
    /// Decide whether the manifold is a totally geodesic boundary.
    Boundary { input: String },
    /// Boundary/soul pairs over all catalog groups of one dimension.
    Pairs {
        #[arg(long)]
        dim: usize,
    },
    /// Glue a band to a copy of itself.
    Double { band: String },
    /// Glue two bands along their common boundary.
    Glue { first: String, second: String },
    /// Orientation double cover.
    Cover { input: String },
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnknownEntry(_) | Error::IncompatibleStyle { .. } | Error::InvalidParameter(_) => EXIT_USAGE,
            Error::Internal(_) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        };
        Failure { code, message: e.to_string() }
    }
}

pub(crate) struct Context<'a> {
    pub json: bool,
    pub params: Params,
    pub cap: usize,
    pub max_denominator: Option<u64>,
    stdin: &'a mut dyn Read,
}

/// Runs one command line (including the program name) and returns the exit
/// code.
pub fn run(args: &[String], stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let mut params = Params::default();
    for p in &cli.params {
        if let Err(e) = params.set(p) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    }
    let mut ctx = Context { json: cli.json, params, cap: cli.cap, max_denominator: cli.max_denominator, stdin };
    match dispatch(&cli.command, &mut ctx) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: &Command, ctx: &mut Context) -> Result<String, Failure> {
    match command {
        Command::Catalog => Ok(report::catalog(ctx)),
        Command::Show { name } => report::show(ctx, name),
        Command::Check { input } => {
            let (label, sg) = load_group(ctx, input)?;
            report::check(ctx, &label, &sg)
        }
        Command::Boundary { input } => {
            let (label, sg) = load_group(ctx, input)?;
            report::boundary(ctx, &label, &sg)
        }
        Command::Pairs { dim } => report::pairs(ctx, *dim),
        Command::Double { band } => {
            let b = load_band(ctx, band)?;
            let g = crate::bands::double(&b)?;
            report::constructed(ctx, &format!("double({band})"), &g)
        }
        Command::Glue { first, second } => {
            let b1 = load_band(ctx, first)?;
            let b2 = load_band(ctx, second)?;
            let g = crate::bands::glue(&b1, &b2)?;
            report::constructed(ctx, &format!("glue({first}, {second})"), &g)
        }
        Command::Cover { input } => {
            let (label, sg) = load_group(ctx, input)?;
            let g = crate::bands::orientation_cover(&sg)?;
            report::constructed(ctx, &format!("cover({label})"), &g)
        }
    }
}

enum Loaded {
    Group(SpaceGroup),
    Band(FlatBand),
}

/// `-` reads standard input, an existing path reads a file, anything else is
/// a catalog name.
fn load(ctx: &mut Context, input: &str) -> Result<(String, Loaded), Failure> {
    let text = if input == "-" {
        let mut s = String::new();
        ctx.stdin.read_to_string(&mut s).map_err(|e| Failure::usage(format!("cannot read standard input: {e}")))?;
        Some(s)
    } else if Path::new(input).is_file() {
        Some(std::fs::read_to_string(input).map_err(|e| Failure::usage(format!("cannot read {input}: {e}")))?)
    } else {
        None
    };
    let Some(text) = text else {
        let built = catalog::build(input, &ctx.params).map_err(|e| match e {
            Error::UnknownEntry(_) => Failure::usage(format!("`{input}` is neither a file nor a catalog entry")),
            other => other.into(),
        })?;
        let name = catalog::entry(input)?.name.to_string();
        return Ok(match built {
            Built::Group(g) => (name, Loaded::Group(g)),
            Built::Band(b) => (name, Loaded::Band(b)),
        });
    };
    let located = |e: DocumentError| Failure::invalid(format!("{input}: {e}"));
    let doc = parse_document(&text).map_err(located)?;
    Ok(match doc {
        Document::Group(d) => (label_of(&d.metadata, input), Loaded::Group(d.to_group(ctx.cap).map_err(located)?)),
        Document::Band(d) => (label_of(&d.base.metadata, input), Loaded::Band(d.to_band(ctx.cap).map_err(located)?)),
    })
}

fn label_of(metadata: &Value, fallback: &str) -> String {
    metadata.get("name").and_then(Value::as_str).unwrap_or(fallback).to_string()
}

fn load_group(ctx: &mut Context, input: &str) -> Result<(String, SpaceGroup), Failure> {
    match load(ctx, input)? {
        (label, Loaded::Group(g)) => Ok((label, g)),
        (label, Loaded::Band(_)) => Err(Failure::invalid(format!("{label} is a band; expected a group"))),
    }
}

fn load_band(ctx: &mut Context, input: &str) -> Result<FlatBand, Failure> {
    match load(ctx, input)? {
        (_, Loaded::Band(b)) => Ok(b),
        (label, Loaded::Group(_)) => Err(Failure::invalid(format!("{label} is a group; expected a band"))),
    }
}
