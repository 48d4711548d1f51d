//! `pldnn` — gate tables, expression circuits, rule inference and network
//! export from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error (parse, validation,
//! inference or I/O failure).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand};

use pldnn::expr::{
    comparison_report, compile_expression, evaluate_circuit, format_circuit_table,
    parse_expression,
};
use pldnn::gates::{build_gate, format_truth_table, gate_truth_table, structure_counts, GateKind};
use pldnn::network::{
    deserialize_network, export_dot, serialize_network, Network, NetworkError,
    SerialError,
};
use pldnn::rules::{
    compile_rule_library, infer_bounded, parse_rule_library, trace_inference_bounded,
    CompileMode, InferenceRound, Literal,
};

const MAX_ROUNDS_VAR: &str = "PLDNN_MAX_ROUNDS";

#[derive(Debug, Parser)]
#[command(name = "pldnn", version, about = "Logical neural networks with inhibitory links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build one of the six logic gates.
    #[command(group(ArgGroup::new("output").required(true).args(["table", "counts", "dot", "net"])))]
    Gate {
        /// AND, OR, NOT, NOR, XOR or NAND (case-insensitive).
        kind: GateKind,
        /// Print the exhaustive truth table.
        #[arg(long)]
        table: bool,
        /// Print neuron and link counts.
        #[arg(long)]
        counts: bool,
        /// Print the network as Graphviz DOT.
        #[arg(long)]
        dot: bool,
        /// Print the serialized network document.
        #[arg(long)]
        net: bool,
    },
    /// Compile a propositional expression into a network.
    #[command(group(ArgGroup::new("output").required(true).args(["table", "eval", "counts", "report", "dot", "net"])))]
    Expr {
        /// Expression over `!`, `&`, `NAND`, `NOR`, `^` and `|`.
        text: String,
        #[arg(long)]
        table: bool,
        /// Evaluate under `name=value,...` with values 0/1 or true/false.
        #[arg(long, value_name = "BINDINGS")]
        eval: Option<String>,
        #[arg(long)]
        counts: bool,
        /// Compare the circuit size against the SN P reference.
        #[arg(long)]
        report: bool,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        net: bool,
    },
    /// Compile a rule file and run inference over observed facts.
    #[command(group(ArgGroup::new("output").required(true).args(["infer", "dot", "net"])))]
    Rules {
        file: PathBuf,
        /// `conj` (specificity via CELs) or `comp` (per-antecedent competition).
        #[arg(long, default_value = "conj")]
        mode: CompileMode,
        /// Observed facts: `atom` is positive, `!atom` negative.
        #[arg(long, value_name = "FACTS", value_delimiter = ',', allow_hyphen_values = true)]
        infer: Option<Vec<String>>,
        /// Print the per-round activations, inhibitions and masked links.
        #[arg(long, requires = "infer")]
        trace: bool,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        net: bool,
    },
    /// Render a serialized network.
    Export {
        netfile: PathBuf,
        #[arg(long, required = true)]
        dot: bool,
    },
    /// Check a serialized network against every structural invariant.
    Validate { netfile: PathBuf },
}

fn max_rounds() -> Result<Option<usize>> {
    match std::env::var(MAX_ROUNDS_VAR) {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => bail!("{MAX_ROUNDS_VAR} must be a positive integer, got `{text}`"),
        },
        Err(_) => Ok(None),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn parse_bindings(text: &str) -> Result<BTreeMap<String, bool>> {
    let mut bindings = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = pair
            .split_once('=')
            .ok_or_else(|| anyhow!("binding `{pair}` is not `name=value`"))?;
        let value = match value.trim() {
            "1" | "true" | "T" => true,
            "0" | "false" | "F" => false,
            other => bail!("value `{other}` for `{}` is not 0/1 or true/false", name.trim()),
        };
        if bindings.insert(name.trim().to_owned(), value).is_some() {
            bail!("variable `{}` bound twice", name.trim());
        }
    }
    Ok(bindings)
}

fn print_network(network: &Network, dot: bool) {
    if dot {
        print!("{}", export_dot(network));
    } else {
        print!("{}", serialize_network(network));
    }
}

fn print_trace(rounds: &[InferenceRound]) {
    for round in rounds {
        let marker = if round.fixed_point { " (fixed point)" } else { "" };
        println!("round {}{marker}", round.round);
        if !round.activated.is_empty() {
            println!("  activated: {}", round.activated.join(", "));
        }
        for inhibition in &round.active_inhibitions {
            println!("  inhibition: {inhibition}");
        }
        for masked in &round.masked {
            println!("  masked: {masked}");
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gate {
            kind,
            table,
            counts,
            dot,
            ..
        } => {
            let gate = build_gate(kind);
            if table {
                let names: Vec<String> = (1..=kind.arity()).map(|i| format!("in{i}")).collect();
                print!("{}", format_truth_table(&names, &gate_truth_table(&gate)));
            } else if counts {
                print!("{}", structure_counts(&gate.network));
            } else {
                print_network(&gate.network, dot);
            }
        }
        Command::Expr {
            text,
            table,
            eval,
            counts,
            report,
            dot,
            ..
        } => {
            let expr = parse_expression(&text).context("cannot parse expression")?;
            let circuit = compile_expression(&expr);
            if table {
                print!("{}", format_circuit_table(&circuit)?);
            } else if let Some(bindings) = eval {
                let value = evaluate_circuit(&circuit, &parse_bindings(&bindings)?)?;
                println!("{}", u8::from(value));
            } else if counts {
                print!("{}", structure_counts(&circuit.network));
            } else if report {
                print!("{}", comparison_report(&circuit));
            } else {
                print_network(&circuit.network, dot);
            }
        }
        Command::Rules {
            file,
            mode,
            infer,
            trace,
            dot,
            ..
        } => {
            let library = parse_rule_library(&read(&file)?)
                .with_context(|| format!("in {}", file.display()))?;
            let knet = compile_rule_library(&library, mode)?;
            if let Some(facts) = infer {
                let observed = facts
                    .iter()
                    .filter(|f| !f.trim().is_empty())
                    .map(|f| Literal::parse_fact(f))
                    .collect::<Result<Vec<_>, _>>()?;
                let budget = max_rounds()?;
                if trace {
                    print_trace(&trace_inference_bounded(&knet, &observed, budget)?);
                }
                for atom in infer_bounded(&knet, &observed, budget)? {
                    println!("{atom}");
                }
            } else {
                print_network(&knet.network, dot);
            }
        }
        Command::Export { netfile, .. } => {
            let network = deserialize_network(&read(&netfile)?)
                .with_context(|| format!("in {}", netfile.display()))?;
            print!("{}", export_dot(&network));
        }
        Command::Validate { netfile } => {
            let text = read(&netfile)?;
            let network = match deserialize_network(&text) {
                Ok(network) => network,
                Err(SerialError::Network(NetworkError::Invalid(violations))) => {
                    for v in &violations {
                        eprintln!("violation: {v}");
                    }
                    bail!("{} has {} violation(s)", netfile.display(), violations.len());
                }
                Err(e) => return Err(e).context(format!("in {}", netfile.display())),
            };
            println!(
                "valid: {} neurons, {} exciting links, {} inhibitory links, {} groups",
                network.neurons().len(),
                network.exciting_links().len(),
                network.inhibitory_links().len(),
                network.groups().len()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
