use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use nnipcg::dot::{graph_to_dot, oriented_to_dot, rooted_tree_to_dot, tree_to_dot};
use nnipcg::graph::{parse_graph, parse_oriented};
use nnipcg::oracle::{check_characterization, explainable_set, EnumerationBudget};
use nnipcg::oriented::{construct_oriented, enumerate_rooted, recognize_oriented, verify_oriented, LeafRooting};
use nnipcg::tree::parse_tree;
use nnipcg::{recognize, verify, Graph, LabeledTree, OrientedCertificate, OrientedGraph, RootedLabeledTree, Weight};

/// Graphs explained by the exactly-k relation of edge-weighted trees.
///
/// Exit status: 0 for success or a positive answer, 1 for a negative
/// answer, 2 for usage, input or internal errors.
#[derive(Parser)]
#[command(name = "nnipcg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Emit Graphviz DOT.
    #[arg(long)]
    dot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the graph a tree explains.
    Explain {
        /// Newick tree file, or - for standard input.
        tree: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        k: Weight,
        /// Read the written root as the tree root and print the oriented graph.
        #[arg(long)]
        rooted: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Decide whether a graph is explained for k = 2 and print a witness tree
    /// or a certificate.
    Recognize {
        /// Edge-list graph file, or - for standard input.
        graph: PathBuf,
        /// Read arcs and look for a rooted tree.
        #[arg(long)]
        oriented: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Print the canonical form of a tree.
    Canonicalize {
        tree: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Print the false-twin quotient of a graph.
    Quotient {
        graph: PathBuf,
        #[arg(long)]
        oriented: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Check that a tree explains a graph; prints OK or MISMATCH.
    Verify {
        tree: PathBuf,
        graph: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        k: Weight,
        /// Rooted tree against an oriented graph.
        #[arg(long)]
        rooted: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// List the rooted canonical trees of a canonical tree.
    Roots {
        tree: PathBuf,
        #[arg(long, value_enum, default_value_t = Rooting::Corrected)]
        leaf_rooting: Rooting,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate all small trees and compare with the characterisation.
    Oracle {
        /// Largest number of leaves.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=7))]
        n: u64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        k: Weight,
        /// Largest edge weight; defaults to k + 1.
        #[arg(long)]
        max_weight: Option<Weight>,
        /// Only trees without two leaves at distance 0.
        #[arg(long)]
        zero_discrete: bool,
        /// Only canonical trees (interior edges weigh at least 1).
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        canonical_only: bool,
        /// Also write a JSON summary here.
        #[arg(long, value_name = "PATH")]
        summary: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Rooting {
    Corrected,
    AsWritten,
    ZeroLeaves,
}

impl From<Rooting> for LeafRooting {
    fn from(r: Rooting) -> Self {
        match r {
            Rooting::Corrected => LeafRooting::Corrected,
            Rooting::AsWritten => LeafRooting::AsWritten,
            Rooting::ZeroLeaves => LeafRooting::ZeroLeaves,
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading standard input")?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_tree(path: &Path) -> Result<LabeledTree> {
    parse_tree(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_rooted(path: &Path) -> Result<RootedLabeledTree> {
    RootedLabeledTree::parse(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_oriented(path: &Path) -> Result<OrientedGraph> {
    parse_oriented(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn names(ids: impl IntoIterator<Item = usize>, name: impl Fn(usize) -> String) -> String {
    ids.into_iter().map(name).collect::<Vec<_>>().join(" ")
}

fn explain(tree: &Path, k: Weight, rooted: bool, output: &Output) -> Result<ExitCode> {
    let text = if rooted {
        let d = load_rooted(tree)?.directed_explain(k);
        if output.dot {
            oriented_to_dot(&d)
        } else {
            d.to_text()
        }
    } else {
        let g = load_tree(tree)?.explain(k);
        if output.dot {
            graph_to_dot(&g)
        } else {
            g.to_text()
        }
    };
    write_output(output.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn recognize_cmd(graph: &Path, oriented: bool, output: &Output) -> Result<ExitCode> {
    if oriented {
        let d = load_oriented(graph)?;
        let name = |v: usize| d.name(v).into_owned();
        return match recognize_oriented(&d) {
            Ok(()) => {
                let t = construct_oriented(&d)?;
                let text = if output.dot { rooted_tree_to_dot(&t) } else { format!("{}\n", t.to_newick()) };
                write_output(output.out.as_deref(), &text)?;
                Ok(ExitCode::SUCCESS)
            }
            Err(OrientedCertificate::Cycle(c)) => {
                write_output(output.out.as_deref(), &format!("not explainable; cycle: {}\n", names(c, name)))?;
                Ok(ExitCode::from(1))
            }
            Err(OrientedCertificate::InStar(x, z, y)) => {
                let text = format!("not explainable; in-star: {} -> {} <- {}\n", name(x), name(z), name(y));
                write_output(output.out.as_deref(), &text)?;
                Ok(ExitCode::from(1))
            }
        };
    }
    let g = load_graph(graph)?;
    let outcome = recognize(&g, 2)?;
    match outcome.witness() {
        Some(t) => {
            let text = if output.dot { tree_to_dot(t) } else { format!("{}\n", t.to_newick()) };
            write_output(output.out.as_deref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        None => {
            let block = outcome.certificate().expect("a negative outcome has a certificate");
            let text = format!(
                "not explainable; non-clique block: {}\n",
                names(block.iter().copied(), |v| g.name(v).into_owned())
            );
            write_output(output.out.as_deref(), &text)?;
            Ok(ExitCode::from(1))
        }
    }
}

fn canonicalize(tree: &Path, output: &Output) -> Result<ExitCode> {
    let t = load_tree(tree)?.canonicalize();
    let text = if output.dot { tree_to_dot(&t) } else { format!("{}\n", t.to_newick()) };
    write_output(output.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn quotient(graph: &Path, oriented: bool, output: &Output) -> Result<ExitCode> {
    let mut text = String::new();
    if oriented {
        let d = load_oriented(graph)?;
        let p = d.twin_partition();
        let q = d.quotient(&p)?;
        if output.dot {
            text = oriented_to_dot(&q);
        } else {
            for class in p.classes() {
                writeln!(text, "# class: {}", names(class.iter().copied(), |v| d.name(v).into_owned()))?;
            }
            text.push_str(&q.to_text());
        }
    } else {
        let g = load_graph(graph)?;
        let p = g.false_twin_partition();
        let q = g.quotient(&p)?;
        if output.dot {
            text = graph_to_dot(&q);
        } else {
            for class in p.classes() {
                writeln!(text, "# class: {}", names(class.iter().copied(), |v| g.name(v).into_owned()))?;
            }
            text.push_str(&q.to_text());
        }
    }
    write_output(output.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn verify_cmd(tree: &Path, graph: &Path, k: Weight, rooted: bool, out: Option<&Path>) -> Result<ExitCode> {
    let ok = if rooted {
        verify_oriented(&load_rooted(tree)?, &load_oriented(graph)?, k)?
    } else {
        verify(&load_tree(tree)?, &load_graph(graph)?, k)?
    };
    write_output(out, if ok { "OK\n" } else { "MISMATCH\n" })?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn roots(tree: &Path, rooting: Rooting, output: &Output) -> Result<ExitCode> {
    let t = load_tree(tree)?;
    let mut text = String::new();
    for r in enumerate_rooted(&t, rooting.into())? {
        if output.dot {
            text.push_str(&rooted_tree_to_dot(&r));
        } else {
            writeln!(text, "{}", r.to_newick())?;
        }
    }
    write_output(output.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

/// Non-members are listed up to this many vertices; above it the
/// isomorphism classes are too costly to enumerate.
const LIST_NON_MEMBERS_UP_TO: usize = 6;

fn oracle(budget: EnumerationBudget, k: Weight, summary: Option<&Path>, out: Option<&Path>) -> Result<ExitCode> {
    let set = explainable_set(&budget, k)?;
    let mut text = String::new();
    let mut status = ExitCode::SUCCESS;
    if k <= 2 {
        let report = check_characterization(&budget, k)?;
        text.push_str(&report.to_string());
        if report.discrepancy_count() > 0 {
            status = ExitCode::from(1);
        }
        if let Some(path) = summary {
            fs::write(path, serde_json::to_string_pretty(&report)?).with_context(|| format!("writing {}", path.display()))?;
        }
    } else {
        let b = &budget;
        writeln!(
            text,
            "k={k} max_leaves={} max_weight={} canonical_only={} zero_discrete_only={}",
            b.max_leaves, b.max_weight, b.canonical_only, b.zero_discrete_only
        )?;
        if let Some(path) = summary {
            let counts: Vec<(usize, usize)> = (1..=b.max_leaves).map(|n| (n, set.class_count(n))).collect();
            let json = serde_json::json!({ "k": k, "budget": b, "classes": counts });
            fs::write(path, serde_json::to_string_pretty(&json)?).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    for n in 1..=budget.max_leaves {
        writeln!(text, "explainable classes n={n}: {}", set.class_count(n))?;
        if n <= LIST_NON_MEMBERS_UP_TO {
            let missing = set.non_members(n);
            writeln!(text, "non-members n={n}: {}", missing.len())?;
            for g in missing {
                text.push_str("# not explainable\n");
                text.push_str(&g.to_text());
            }
        }
    }
    write_output(out, &text)?;
    Ok(status)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Explain { tree, k, rooted, output } => explain(&tree, k, rooted, &output),
        Command::Recognize { graph, oriented, output } => recognize_cmd(&graph, oriented, &output),
        Command::Canonicalize { tree, output } => canonicalize(&tree, &output),
        Command::Quotient { graph, oriented, output } => quotient(&graph, oriented, &output),
        Command::Verify { tree, graph, k, rooted, out } => verify_cmd(&tree, &graph, k, rooted, out.as_deref()),
        Command::Roots { tree, leaf_rooting, output } => roots(&tree, leaf_rooting, &output),
        Command::Oracle {
            n,
            k,
            max_weight,
            zero_discrete,
            canonical_only,
            summary,
            out,
        } => {
            let budget = EnumerationBudget {
                max_leaves: n as usize,
                max_weight: max_weight.unwrap_or(k + 1),
                canonical_only,
                zero_discrete_only: zero_discrete,
            };
            oracle(budget, k, summary.as_deref(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
