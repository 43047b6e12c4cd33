//! Command-line front end: parsers, subcommands and the verification suite.

pub mod expr;
pub mod surface_file;
pub mod verify;

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use crate::center::verify_center;
use crate::chebyshev::cheb_closed_form;
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::flips::{flip, transfer_with, verify_frobenius_flip};
use crate::frobenius::{epsilon_to_source, frobenius};
use crate::qtorus::CommutationMatrix;
use crate::random::DEFAULT_SEED;
use crate::scalars::{root_data, Ring};
use crate::surface::{builtin, Quasitriangulation};
use crate::surgery::{add_point_boundary, add_point_unmarked, plug_hole, surgery_multiply, SurgeryContext, SurgeryMap};

pub use expr::{parse_expression, parse_surgery};
pub use surface_file::parse_surface;
pub use verify::{run_suite, CheckResult, VerifyOptions};

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "skein-torus", version, about = "Quantum torus and skein algebra identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct RingArg {
    /// Work modulo the m-th cyclotomic polynomial in v.
    #[arg(long = "mod", value_name = "M")]
    modulus: Option<u32>,
}

impl RingArg {
    fn ring(self) -> Result<Ring> {
        Ring::from_modulus(self.modulus)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the vertex matrix. SURFACE is a file path or `builtin:NAME`.
    Vmatrix { surface: String },
    /// Check that the kernel of the vertex matrix is spanned by boundary vectors.
    Center { surface: String },
    /// Flip an edge and print the new quasitriangulation.
    Flip {
        surface: String,
        #[arg(long)]
        edge: String,
        #[command(flatten)]
        ring: RingArg,
    },
    /// Push an element through the flip transfer map.
    Transfer {
        surface: String,
        #[arg(long)]
        edge: String,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        ring: RingArg,
    },
    /// Chebyshev expansions.
    Cheb {
        #[command(subcommand)]
        action: ChebAction,
    },
    /// Frobenius checks on every flippable edge, or the image of one element.
    Frobenius {
        #[arg(long)]
        file: String,
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        ring: RingArg,
        /// Element of the epsilon-torus to map.
        #[arg(long)]
        expr: Option<String>,
    },
    /// Surgery algebra operations.
    Surgery {
        #[command(subcommand)]
        action: SurgeryAction,
    },
    /// Run the identity verification suite.
    Verify {
        #[command(flatten)]
        ring: RingArg,
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Run checks one after another.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Subcommand, Debug)]
enum ChebAction {
    /// Print the closed form of T_n(K + K^-1 + E).
    Expand {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        ring: RingArg,
    },
}

#[derive(Subcommand, Debug)]
enum SurgeryAction {
    /// Multiply two elements of the surgery algebra.
    Mul {
        surface: String,
        lhs: String,
        rhs: String,
        #[command(flatten)]
        ring: RingArg,
    },
    /// Apply the map that fills an unmarked boundary component.
    Plug {
        surface: String,
        #[arg(long)]
        hole: String,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        ring: RingArg,
    },
    /// Apply the map that adds a marked point, on a boundary edge or on a hole.
    Addpoint {
        surface: String,
        #[arg(long, conflicts_with = "hole", required_unless_present = "hole")]
        edge: Option<String>,
        #[arg(long)]
        hole: Option<String>,
        #[arg(long)]
        expr: String,
        #[command(flatten)]
        ring: RingArg,
    },
}

/// Run the tool on `argv` (including the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_PASS, stdout: text, stderr: String::new() }
            };
        }
    };
    match execute(cli.command) {
        Ok((passed, stdout)) => {
            Outcome { code: if passed { EXIT_PASS } else { EXIT_CHECK_FAILED }, stdout, stderr: String::new() }
        }
        Err(e) => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

/// Load `builtin:NAME` or a surface file.
pub fn load_surface(arg: &str) -> Result<Quasitriangulation> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return Ok(builtin(name)?.1);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::InvalidArgument(format!("cannot read {arg}: {e}")))?;
    Ok(parse_surface(&text)?.1)
}

/// The matrix as an aligned table with row and column labels.
pub fn format_matrix(p: &CommutationMatrix) -> String {
    let width = p
        .labels()
        .iter()
        .map(|l| l.len())
        .chain(p.rows().iter().flatten().map(|e| e.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = format!("{:width$}", "");
    for l in p.labels() {
        let _ = write!(out, " {l:>width$}");
    }
    out.push('\n');
    for (l, row) in p.labels().iter().zip(p.rows()) {
        let _ = write!(out, "{l:>width$}");
        for e in row {
            let _ = write!(out, " {e:>width$}");
        }
        out.push('\n');
    }
    out
}

type Report = Result<(bool, String)>;

fn execute(cmd: Command) -> Report {
    match cmd {
        Command::Vmatrix { surface } => Ok((true, format_matrix(&load_surface(&surface)?.vertex_matrix()))),
        Command::Center { surface } => center(&load_surface(&surface)?),
        Command::Flip { surface, edge, ring } => {
            let q = load_surface(&surface)?;
            let f = flip(&q, &edge)?;
            let theta = f.theta_of_flipped(&ring.ring()?)?;
            Ok((true, format!("{}theta({}) = {theta}\n", f.new_q.to_surface_file(), f.old_edge)))
        }
        Command::Transfer { surface, edge, expr, ring } => {
            let q = load_surface(&surface)?;
            let r = ring.ring()?;
            let x = parse_expression(&expr, &q.x_torus(), &r)?;
            let f = flip(&q, &edge)?;
            Ok((true, format!("{}\n", transfer_with(&q, &f, &x)?)))
        }
        Command::Cheb { action: ChebAction::Expand { n, ring } } => {
            Ok((true, format!("{}\n", cheb_closed_form(&ring.ring()?, n)?)))
        }
        Command::Frobenius { file, n, ring, expr } => frobenius_cmd(&load_surface(&file)?, n, &ring.ring()?, expr),
        Command::Surgery { action } => surgery(action),
        Command::Verify { ring, suite, seed, sequential } => {
            let strategy = if sequential { Strategy::Sequential } else { Strategy::default() };
            let results = run_suite(&VerifyOptions { modulus: ring.modulus, suite, seed, strategy })?;
            let mut out = String::new();
            for r in &results {
                out.push_str(&r.line());
                out.push('\n');
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            let _ = writeln!(out, "{} passed, {failed} failed", results.len() - failed);
            Ok((failed == 0, out))
        }
    }
}

fn center(q: &Quasitriangulation) -> Report {
    let r = verify_center(q);
    let mut out = String::new();
    let _ = writeln!(out, "nullity {}", r.nullity);
    let _ = writeln!(out, "marked components {}", r.marked_components);
    for v in &r.kernel.vectors {
        let row: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "kernel [{}]", row.join(" "));
    }
    for (name, k) in &r.boundary_vectors {
        let _ = writeln!(out, "k_{name} {k:?}");
    }
    let status = |b: bool| if b { "PASS" } else { "FAIL" };
    let _ = writeln!(out, "{} nullity-equals-marked-components", status(r.nullity == r.marked_components));
    let _ = writeln!(out, "{} kernel-equals-boundary-lattice", status(r.lattice_equal));
    let _ = writeln!(out, "{} boundary-monomials-central", status(r.central));
    Ok((r.passed(), out))
}

fn frobenius_cmd(q: &Quasitriangulation, n: u32, ring: &Ring, expr: Option<String>) -> Report {
    let t = q.x_torus();
    if let Some(e) = expr {
        let x = parse_expression(&e, &t, ring)?;
        return Ok((true, format!("{}\n", frobenius(&epsilon_to_source(&x, n), n, &t)?)));
    }
    let mut out = String::new();
    if let Some(m) = ring.modulus() {
        let _ = writeln!(out, "m = {m}, root N = {}", root_data(m).n);
    }
    let mut all = true;
    for e in q.edges() {
        match verify_frobenius_flip(q, &e.name, ring, n) {
            Ok(ok) => {
                all &= ok;
                let _ = writeln!(out, "{} frobenius-flip {} N={n}", if ok { "PASS" } else { "FAIL" }, e.name);
            }
            Err(Error::NotFlippable { .. }) => {}
            Err(err) => return Err(err),
        }
    }
    Ok((all, out))
}

fn surgery(action: SurgeryAction) -> Report {
    let apply = |ctx: &Arc<SurgeryContext>, map: SurgeryMap, expr: &str, ring: &Ring| -> Report {
        let x = parse_surgery(expr, ctx, ring)?;
        Ok((true, format!("{}\n", map.apply(&x)?)))
    };
    match action {
        SurgeryAction::Mul { surface, lhs, rhs, ring } => {
            let ctx = SurgeryContext::new(&load_surface(&surface)?)?;
            let r = ring.ring()?;
            let product = surgery_multiply(&parse_surgery(&lhs, &ctx, &r)?, &parse_surgery(&rhs, &ctx, &r)?)?;
            Ok((true, format!("{product}\n")))
        }
        SurgeryAction::Plug { surface, hole, expr, ring } => {
            let ctx = SurgeryContext::new(&load_surface(&surface)?)?;
            let r = ring.ring()?;
            apply(&ctx, plug_hole(&ctx, &hole, &r)?, &expr, &r)
        }
        SurgeryAction::Addpoint { surface, edge, hole, expr, ring } => {
            let ctx = SurgeryContext::new(&load_surface(&surface)?)?;
            let r = ring.ring()?;
            let map = match (edge, hole) {
                (Some(a), _) => add_point_boundary(&ctx, &a, &r)?,
                (None, Some(b)) => add_point_unmarked(&ctx, &b, &r)?,
                (None, None) => return Err(Error::InvalidArgument("addpoint needs --edge or --hole".into())),
            };
            apply(&ctx, map, &expr, &r)
        }
    }
}
