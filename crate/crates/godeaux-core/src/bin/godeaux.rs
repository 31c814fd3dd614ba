//! Command-line entry point: recompute the stratification tables, Hasse
//! diagrams, modular systems, ambient groups and inertia decompositions for
//! the three torsion cases.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on internal consistency
//! failures.

use clap::{Parser, Subcommand};
use godeaux_core::report::{
    cmd_ambient, cmd_config, cmd_equations, cmd_group_id, cmd_inertia, cmd_strata, Context, Format,
};

#[derive(Parser)]
#[command(
    name = "godeaux",
    version,
    about = "Automorphism stratification and inertia components of the numerical Godeaux moduli spaces with torsion of order 3, 4, 5"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stratification table, collapsed components and Hasse diagram.
    Strata {
        #[arg(long)]
        nu: u32,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Inertia components with centralizers and subcomponent groups.
    Inertia {
        #[arg(long)]
        nu: u32,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// The modular equation system of one twist.
    Equations {
        #[arg(long)]
        nu: u32,
        /// Twist as a unit of Z/nu.
        #[arg(long)]
        twist: u32,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Orders, structure and generators of the ambient group H_nu.
    Ambient {
        #[arg(long)]
        nu: u32,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Dump the case configuration as JSON.
    Config {
        #[arg(long)]
        nu: u32,
    },
    /// Generate a subgroup from tuples, quotient by torsion and identify it.
    GroupId {
        #[arg(long)]
        nu: u32,
        /// Semicolon-separated tuples, e.g. "(0,0,0,2)" or "(2,2,0,0);(0,0,0,1)".
        #[arg(long)]
        generators: String,
        #[arg(long, default_value = "table")]
        format: String,
    },
}

fn run() -> Result<String, (i32, String)> {
    let cli = Cli::try_parse().map_err(|e| (1, e.to_string()))?;
    let usage = |e: godeaux_core::GodeauxError| (1i32, e.to_string());
    let internal = |e: godeaux_core::GodeauxError| (2i32, e.to_string());
    let nu_arg = match &cli.command {
        Command::Strata { nu, .. }
        | Command::Inertia { nu, .. }
        | Command::Equations { nu, .. }
        | Command::Ambient { nu, .. }
        | Command::Config { nu }
        | Command::GroupId { nu, .. } => *nu,
    };
    if !(3..=5).contains(&nu_arg) {
        return Err((
            1,
            format!("unsupported torsion order {} (expected 3, 4 or 5)", nu_arg),
        ));
    }
    match cli.command {
        Command::Strata { nu, format } => {
            let f: Format = format.parse().map_err(usage)?;
            let ctx = Context::build(nu).map_err(internal)?;
            cmd_strata(&ctx, f).map_err(internal)
        }
        Command::Inertia { nu, format } => {
            let f: Format = format.parse().map_err(usage)?;
            if f == Format::Dot {
                return Err((1, "inertia supports table or json".into()));
            }
            let ctx = Context::build(nu).map_err(internal)?;
            cmd_inertia(&ctx, f).map_err(internal)
        }
        Command::Equations { nu, twist, format } => {
            let f: Format = format.parse().map_err(usage)?;
            let ctx = Context::build(nu).map_err(internal)?;
            // an invalid twist is a usage error, not an internal one
            ctx.case.twist_exponent(twist).map_err(usage)?;
            cmd_equations(&ctx, twist, f).map_err(internal)
        }
        Command::Ambient { nu, format } => {
            let f: Format = format.parse().map_err(usage)?;
            let ctx = Context::build(nu).map_err(internal)?;
            cmd_ambient(&ctx, f).map_err(internal)
        }
        Command::Config { nu } => {
            let ctx = Context::build(nu).map_err(internal)?;
            cmd_config(&ctx, Format::Json).map_err(internal)
        }
        Command::GroupId {
            nu,
            generators,
            format,
        } => {
            let f: Format = format.parse().map_err(usage)?;
            let ctx = Context::build(nu).map_err(internal)?;
            godeaux_core::report::parse_generators(&ctx.case, &generators).map_err(usage)?;
            cmd_group_id(&ctx, &generators, f).map_err(internal)
        }
    }
}

fn main() {
    match run() {
        Ok(out) => {
            print!("{}", out);
        }
        Err((code, msg)) => {
            eprintln!("{}", msg);
            std::process::exit(code);
        }
    }
}
