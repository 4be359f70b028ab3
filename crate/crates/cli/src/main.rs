//! `digitop`: the command-line front end.
//!
//! Reports go to stdout as JSON, diagnostics to stderr. Exit status is 0 for
//! yes or a verified construction, 1 for no, 2 for unknown or an error.

use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use digitop::circle::{self, DiamondLoop, DiamondWinding};
use digitop::cofib::{self, RetractionWitness};
use digitop::funcspace::{maps_adjacent, PathFile};
use digitop::homotopy;
use digitop::lattice::{product, DigitalImage, Point};
use digitop::lscat::{self, DcatOptions};
use digitop::maps::DigitalMap;
use digitop::{fixtures, subdivision, suite};

#[derive(Parser)]
#[command(name = "digitop", version, about = "Digital homotopy theory on the integer lattice")]
struct Cli {
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

/// An image given as a JSON file or a fixture name such as `diamond` or `interval:3`.
#[derive(Args)]
struct ImageArg {
    #[arg(value_name = "IMAGE")]
    positional: Option<String>,
    #[arg(long = "image", value_name = "FILE")]
    flag: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named image: diamond, circle8, sphere:N, interval:N, cube:N:D.
    Fixtures {
        #[arg(long)]
        name: String,
    },
    /// Check a map for continuity.
    CheckMap {
        #[arg(long = "map", value_name = "FILE")]
        map: String,
    },
    /// Cartesian product of two images.
    Product {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// k-fold subdivision of an image, with its projection.
    Subdivide {
        #[command(flatten)]
        image: ImageArg,
        #[arg(long)]
        factor: u32,
    },
    /// Are two maps adjacent in the mapping space?
    MapsAdjacent {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Decide whether two maps are homotopic.
    Homotopic {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Decide whether an image is contractible.
    Contractible {
        #[command(flatten)]
        image: ImageArg,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    /// Search for a contraction of some subdivision.
    SubdivisionContractible {
        #[command(flatten)]
        image: ImageArg,
        #[arg(long, default_value_t = 4)]
        k_max: u32,
        #[arg(long)]
        max_steps: Option<usize>,
    },
    #[command(subcommand)]
    Verify(Verify),
    #[command(subcommand)]
    Lift(Lift),
    /// Winding number of a loop in the Diamond.
    Winding {
        #[arg(long = "loop", value_name = "FILE")]
        loop_file: String,
    },
    /// Bounds on digital LS category.
    Dcat {
        #[command(flatten)]
        image: ImageArg,
        #[arg(long, default_value_t = 4)]
        k_max: u32,
        #[arg(long)]
        max_steps: Option<usize>,
        /// JSON list of candidate subsets.
        #[arg(long)]
        subsets: Option<String>,
        #[arg(long, default_value_t = 12)]
        exact_cover_limit: usize,
    },
}

#[derive(Subcommand)]
enum Verify {
    /// Retraction for {0} ↪ I_M.
    CofibrationOrigin {
        #[arg(long = "M")]
        m: u32,
        #[arg(long = "N")]
        n: u32,
    },
    /// Retraction for {0, M} ↪ I_M.
    CofibrationEndpoints {
        #[arg(long = "M")]
        m: u32,
        #[arg(long = "N")]
        n: u32,
    },
    /// Pushout filler for an inclusion j, a homotopy H on A × I_N and f on X.
    Pushout {
        #[arg(long)]
        j: String,
        #[arg(long = "H")]
        h: String,
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 2)]
        l: u32,
    },
    /// Borsuk filler for {0} ↪ I_N or {0,N} ↪ I_N.
    Borsuk {
        #[arg(long, value_parser = ["origin", "endpoints"])]
        inclusion: String,
        #[arg(long)]
        z: String,
        /// f on Z × I_N.
        #[arg(long)]
        f: String,
        /// H on (Z × I_M) × A.
        #[arg(long = "H")]
        h: String,
    },
    /// Run the self-check battery.
    Suite {
        #[arg(long, default_value = "all")]
        scope: String,
    },
}

#[derive(Subcommand)]
enum Lift {
    /// Lift against ev_0 on paths. f on Z × I_N, H on Z × I_M.
    PathFibration {
        #[arg(long)]
        z: String,
        #[arg(long)]
        f: String,
        #[arg(long = "H")]
        h: String,
    },
    /// Lift against the endpoint map. H takes values in Y × Y.
    EndpointsFibration {
        #[arg(long)]
        z: String,
        #[arg(long)]
        f: String,
        #[arg(long = "H")]
        h: String,
    },
    /// Lift against ev_N on based paths.
    BasedPathFibration {
        #[arg(long)]
        z: String,
        #[arg(long)]
        f: String,
        #[arg(long = "H")]
        h: String,
        /// JSON coordinates, e.g. "[1,0]".
        #[arg(long)]
        basepoint: String,
    },
    /// Lift a path in the Diamond through ℤ.
    DiamondPath {
        #[arg(long)]
        path: String,
        #[arg(long, default_value_t = 0)]
        start: i64,
    },
    /// Lift a homotopy I_N × I_M → D through ℤ.
    DiamondHomotopy {
        #[arg(long = "H")]
        h: String,
        #[arg(long, default_value_t = 0)]
        start: i64,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {path}"))
}

fn load_image(spec: &str) -> Result<DigitalImage> {
    if Path::new(spec).exists() {
        read_json(spec)
    } else {
        fixtures::by_name(spec).with_context(|| format!("{spec} is neither a file nor a fixture"))
    }
}

impl ImageArg {
    fn load(&self) -> Result<DigitalImage> {
        match (&self.positional, &self.flag) {
            (Some(s), None) | (None, Some(s)) => load_image(s),
            (Some(_), Some(_)) => bail!("give the image once, positionally or with --image"),
            (None, None) => bail!("an image is required"),
        }
    }
}

fn load_map(path: &str) -> Result<DigitalMap> {
    read_json(path)
}

fn emit<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn load_loop(path: &str) -> Result<DigitalMap> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
    if let Ok(m) = serde_json::from_str::<DigitalMap>(&text) {
        return Ok(m);
    }
    let p: PathFile = serde_json::from_str(&text).with_context(|| format!("malformed JSON in {path}"))?;
    Ok(p.to_path(&circle::diamond())?)
}

fn borsuk_witness(inclusion: &str, z: &DigitalImage, f: &DigitalMap, h: &DigitalMap) -> Result<RetractionWitness> {
    // N from f on Z × I_N, M from H on (Z × I_M) × A
    let n = (f.domain().len() / z.len()) as u32 - 1;
    let a_len = if inclusion == "origin" { 1 } else { 2 };
    let m = (h.domain().len() / (z.len() * a_len)) as u32 - 1;
    Ok(match inclusion {
        "origin" => cofib::retraction_origin_interval(n, m)?,
        _ => cofib::retraction_both_endpoints(n, m)?,
    })
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Fixtures { name } => {
            emit(&fixtures::by_name(&name)?)?;
            Ok(0)
        }
        Command::CheckMap { map } => {
            let f = load_map(&map)?;
            let c = f.is_continuous();
            emit(&json!({ "continuous": c }))?;
            Ok(if c { 0 } else { 1 })
        }
        Command::Product { x, y } => {
            emit(&product(&load_image(&x)?, &load_image(&y)?))?;
            Ok(0)
        }
        Command::Subdivide { image, factor } => {
            let x = image.load()?;
            let image = subdivision::subdivide_image(&x, factor)?;
            let projection = subdivision::projection_map(&x, factor)?;
            emit(&json!({ "factor": factor, "image": image, "projection": projection }))?;
            Ok(0)
        }
        Command::MapsAdjacent { f, g } => {
            let a = maps_adjacent(&load_map(&f)?, &load_map(&g)?)?;
            emit(&json!({ "adjacent": a }))?;
            Ok(if a { 0 } else { 1 })
        }
        Command::Homotopic { f, g, max_steps } => {
            let v = homotopy::homotopic(&load_map(&f)?, &load_map(&g)?, max_steps)?;
            emit(&v)?;
            Ok(v.exit_code())
        }
        Command::Contractible { image, max_steps } => {
            let v = homotopy::is_contractible(&image.load()?, max_steps)?;
            emit(&v)?;
            Ok(v.exit_code())
        }
        Command::SubdivisionContractible { image, k_max, max_steps } => {
            let x = image.load()?;
            let ob = DiamondWinding { k_max };
            let v = homotopy::is_subdivision_contractible(&x, k_max, max_steps, &[&ob])?;
            emit(&v)?;
            Ok(v.exit_code())
        }
        Command::Verify(v) => run_verify(v),
        Command::Lift(l) => run_lift(l),
        Command::Winding { loop_file } => {
            let l = DiamondLoop::new(load_loop(&loop_file)?)?;
            emit(&json!({ "raw": circle::winding_number(&l)?, "index": circle::winding_index(&l)? }))?;
            Ok(0)
        }
        Command::Dcat { image, k_max, max_steps, subsets, exact_cover_limit } => {
            let x = image.load()?;
            let list: Option<Vec<DigitalImage>> = subsets.map(|s| read_json(&s)).transpose()?;
            let opts = DcatOptions { k_max, max_steps, exact_cover_limit };
            let r = lscat::dcat(&x, list.as_deref(), opts)?;
            emit(&r)?;
            Ok(r.exit_code())
        }
    }
}

fn run_verify(v: Verify) -> Result<i32> {
    match v {
        Verify::CofibrationOrigin { m, n } => {
            let w = cofib::retraction_origin_interval(m, n)?;
            emit(&w)?;
            Ok(if cofib::verify_retraction(&w) { 0 } else { 1 })
        }
        Verify::CofibrationEndpoints { m, n } => {
            let w = cofib::retraction_both_endpoints(m, n)?;
            emit(&w)?;
            Ok(if cofib::verify_retraction(&w) { 0 } else { 1 })
        }
        Verify::Pushout { j, h, f, l } => {
            let (j, h, f) = (load_map(&j)?, load_map(&h)?, load_map(&f)?);
            let phi = cofib::pushout_candidate(&j, &h, &f, l)?;
            let ok = phi.is_continuous();
            emit(&json!({ "l": l, "continuous": ok, "filler": phi }))?;
            Ok(if ok { 0 } else { 1 })
        }
        Verify::Borsuk { inclusion, z, f, h } => {
            let z = load_image(&z)?;
            let (f, h) = (load_map(&f)?, load_map(&h)?);
            let w = borsuk_witness(&inclusion, &z, &f, &h)?;
            let b = cofib::borsuk_filler(&w, &z, &f, &h)?;
            emit(&b)?;
            Ok(0)
        }
        Verify::Suite { scope } => {
            let r = suite::verify_suite(&scope)?;
            for c in &r.checks {
                eprintln!("{} {}::{} ({} ms)", if c.passed { "PASS" } else { "FAIL" }, c.scope, c.name, c.millis);
            }
            emit(&r)?;
            Ok(if r.all_passed() { 0 } else { 1 })
        }
    }
}

fn run_lift(l: Lift) -> Result<i32> {
    let w = match l {
        Lift::PathFibration { z, f, h } => cofib::path_fibration_lift(&load_image(&z)?, &load_map(&f)?, &load_map(&h)?)?,
        Lift::EndpointsFibration { z, f, h } => {
            cofib::endpoints_fibration_lift(&load_image(&z)?, &load_map(&f)?, &load_map(&h)?)?
        }
        Lift::BasedPathFibration { z, f, h, basepoint } => {
            let y0: Point = serde_json::from_str(&basepoint).context("basepoint must be a JSON coordinate list")?;
            cofib::based_path_fibration_lift(&load_image(&z)?, &y0, &load_map(&f)?, &load_map(&h)?)?
        }
        Lift::DiamondPath { path, start } => {
            let c = circle::lift_path(&load_loop(&path)?, start)?;
            emit(&c)?;
            return Ok(0);
        }
        Lift::DiamondHomotopy { h, start } => {
            let h = load_map(&h)?;
            let n = h.domain().points().iter().map(|p| p.coords()[0]).max().unwrap_or(0) as u32;
            let first = DigitalMap::from_fn(&digitop::interval(n), h.codomain(), |p| {
                h.apply(&p.concat(&Point::from([0]))).expect("bottom row").clone()
            })?;
            let init = circle::lift_path(&first, start)?;
            emit(&circle::lift_homotopy(&h, &init)?)?;
            return Ok(0);
        }
    };
    emit(&w)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return code(2);
        }
    }
    match run(cli) {
        Ok(c) => code(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            code(2)
        }
    }
}
