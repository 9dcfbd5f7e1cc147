mod input;

use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use clasper_core::braid::{bing_braid, milnor_representative};
use clasper_core::clasper::{classify_tree, find_subtrees, graph_degrees, validate_clasper, zip};
use clasper_core::diagram::{enumerate_diagrams, space_dimension, Relation, Skeleton, StuSign};
use clasper_core::knot::{
    a2_invariant, apply_ck_template, conway_polynomial, decide_ck, evaluate_bracket, Invariant, LinkDiagram,
};
use clasper_core::magnus::{magnus_expand, milnor_mu, mu_table};
use clasper_core::verify::{verify_suite, Budget, Status};
use input::{malformed, Malformed};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "clasper", version, about = "Clasper, braid, diagram and knot workbench")]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct PdSource {
    /// PD diagram: inline JSON, a file, or a builtin name.
    #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
    pd: Option<String>,
    /// One of: unknot, trefoil-r, trefoil-l, figure8, hopf-p, hopf-n, borromean.
    #[arg(long)]
    builtin: Option<String>,
}

impl PdSource {
    fn load(&self, check: bool) -> anyhow::Result<LinkDiagram> {
        match (&self.pd, &self.builtin) {
            (Some(p), _) => input::pd(p, check),
            (None, Some(b)) => input::builtin(b),
            (None, None) => Err(malformed("one of --pd or --builtin is required")),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a clasper.v1 graph against the validity conditions.
    ValidateClasper {
        #[arg(long)]
        clasper: String,
    },
    /// Run the zip construction on a marked clasper.
    Zip {
        #[arg(long)]
        clasper: String,
        /// Marked box input ends as [[box_id, slot], ...].
        #[arg(long)]
        marking: String,
    },
    /// Tree classification of one component.
    Classify {
        #[arg(long)]
        clasper: String,
        #[arg(long, default_value_t = 0)]
        component: usize,
    },
    /// A-, S- and strict degrees of one component, plus subtrees.
    Degrees {
        #[arg(long)]
        clasper: String,
        #[arg(long, default_value_t = 0)]
        component: usize,
    },
    /// Compose braids left to right.
    BraidCompose {
        #[arg(long, required = true, num_args = 1..)]
        braid: Vec<String>,
    },
    /// Decide triviality through the Artin action.
    BraidTrivial {
        #[arg(long)]
        braid: String,
    },
    /// Pure braid realizing a simple C_k-move.
    Bing {
        #[arg(long)]
        k: usize,
    },
    StrandDouble {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        index: usize,
    },
    StrandDelete {
        #[arg(long)]
        braid: String,
        /// Comma separated strand indices.
        #[arg(long)]
        strands: String,
    },
    /// Magnus expansion of a free group word {"rank": n, "word": [...]}.
    Magnus {
        #[arg(long)]
        word: String,
        #[arg(long)]
        cutoff: usize,
    },
    Mu {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        index: String,
    },
    MuTable {
        #[arg(long)]
        braid: String,
        #[arg(long)]
        maxlen: usize,
    },
    /// List uni-trivalent diagrams of a given degree.
    Enumerate {
        #[arg(long, default_value = "circle")]
        skeleton: String,
        #[arg(long)]
        degree: usize,
    },
    /// Dimension of a diagram space modulo relations.
    Dim {
        #[arg(long, default_value = "circle")]
        skeleton: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value = "1t,as,ihx,stu")]
        relations: String,
        #[arg(long)]
        reversed_stu: bool,
        /// Write labels of a spanning set to this file.
        #[arg(long)]
        emit_basis: Option<std::path::PathBuf>,
    },
    PdValidate(PdSource),
    Conway(PdSource),
    A2(PdSource),
    /// Insert a C_k template at a site.
    CkApply {
        #[command(flatten)]
        src: PdSource,
        #[arg(long)]
        site: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Alternating sum of an invariant over all subsets of sites.
    Bracket {
        #[command(flatten)]
        src: PdSource,
        #[arg(long)]
        sites: String,
        #[arg(long, default_value = "a2")]
        inv: String,
    },
    /// Decide C_k-equivalence of two knots for k <= 3.
    DecideCk {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        pd1: String,
        #[arg(long)]
        pd2: String,
    },
    /// Pure braid with first nonvanishing mu of length k+1.
    MilnorRep {
        #[arg(long)]
        k: usize,
    },
    /// Run the acceptance checks.
    Verify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "quick")]
        budget: String,
        /// Include elapsed times.
        #[arg(long)]
        timings: bool,
    },
}

/// Text and JSON renderings; `ok = false` exits with 1.
struct Out {
    text: String,
    json: Value,
    ok: bool,
}

impl Out {
    fn new(text: impl ToString, json: Value) -> Self {
        Self { text: text.to_string(), json, ok: true }
    }
}

fn braid_out(b: &clasper_core::braid::BraidWord) -> Out {
    let v = serde_json::to_value(b).expect("serializable");
    Out::new(v.to_string(), v)
}

fn violations_out<T: serde::Serialize + std::fmt::Display>(v: &[T]) -> Out {
    let text = if v.is_empty() {
        "valid".to_string()
    } else {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("\n")
    };
    Out { text, json: json!({"valid": v.is_empty(), "violations": v}), ok: v.is_empty() }
}

fn run(cmd: Cmd) -> anyhow::Result<Out> {
    Ok(match cmd {
        Cmd::ValidateClasper { clasper } => violations_out(&validate_clasper(&input::clasper(&clasper)?)),
        Cmd::Zip { clasper, marking } => {
            let g = input::clasper(&clasper)?;
            let m = input::marking(&marking)?;
            let z = zip(&g, &m)?;
            let mut graph = serde_json::to_value(&z.graph)?;
            graph["schema"] = json!("clasper.v1");
            Out::new(
                graph.to_string(),
                json!({"graph": graph, "steps": z.steps, "step_bound": z.step_bound}),
            )
        }
        Cmd::Classify { clasper, component } => {
            let c = classify_tree(&input::clasper(&clasper)?, component)?;
            let v = serde_json::to_value(&c)?;
            Out::new(v.to_string(), v)
        }
        Cmd::Degrees { clasper, component } => {
            let g = input::clasper(&clasper)?;
            let d = graph_degrees(&g, component)?;
            let s = find_subtrees(&g)?;
            let strict = d.strict_degree.map_or("none".into(), |x| x.to_string());
            let text = format!(
                "a-degree {}\ns-degree {}\nstrict degree {strict}\ngood input subtrees {}",
                d.a_degree,
                d.s_degree,
                s.good_input.len()
            );
            Out::new(text, json!({"degrees": d, "subtrees": s}))
        }
        Cmd::BraidCompose { braid } => {
            let mut it = braid.iter();
            let mut acc = input::braid(it.next().context("no braid given")?)?;
            for b in it {
                acc = acc.compose(&input::braid(b)?)?;
            }
            braid_out(&acc)
        }
        Cmd::BraidTrivial { braid } => {
            let t = input::braid(&braid)?.is_trivial();
            Out::new(t, json!({"trivial": t}))
        }
        Cmd::Bing { k } => braid_out(&bing_braid(k)?),
        Cmd::StrandDouble { braid, index } => braid_out(&input::braid(&braid)?.double_strand(index)?),
        Cmd::StrandDelete { braid, strands } => {
            braid_out(&input::braid(&braid)?.delete_strands(&input::index_list(&strands)?)?)
        }
        Cmd::Magnus { word, cutoff } => {
            let s = magnus_expand(&input::word(&word)?, cutoff)?;
            let mut map = serde_json::Map::new();
            let mut lines = Vec::new();
            for (m, c) in s.terms() {
                let key = m.iter().map(u16::to_string).collect::<Vec<_>>().join(",");
                lines.push(format!("[{key}] {c}"));
                map.insert(key, json!(c));
            }
            Out::new(lines.join("\n"), json!({"rank": s.rank(), "cutoff": s.cutoff(), "terms": map}))
        }
        Cmd::Mu { braid, index } => {
            let idx = input::index_list(&index)?;
            let v = milnor_mu(&input::braid(&braid)?, &idx)?;
            Out::new(v, json!({"index": idx, "mu": v}))
        }
        Cmd::MuTable { braid, maxlen } => {
            let t = mu_table(&input::braid(&braid)?, maxlen)?;
            let text = t
                .entries
                .iter()
                .map(|(i, v)| format!("{} {v}", i.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join("\n");
            Out::new(text, serde_json::to_value(&t)?)
        }
        Cmd::Enumerate { skeleton, degree } => {
            let s = parse_skeleton(&skeleton)?;
            let ds = enumerate_diagrams(&s, degree);
            let text = ds.iter().map(|d| d.label()).collect::<Vec<_>>().join("\n");
            Out::new(text, json!(ds.iter().map(|d| d.to_utd()).collect::<Vec<_>>()))
        }
        Cmd::Dim { skeleton, degree, relations, reversed_stu, emit_basis } => {
            let s = parse_skeleton(&skeleton)?;
            let rels = Relation::parse_list(&relations).map_err(malformed)?;
            let sign = if reversed_stu { StuSign::Reversed } else { StuSign::Standard };
            let d = space_dimension(&s, degree, &rels, sign);
            if let Some(path) = emit_basis {
                let mut body = d.basis.join("\n");
                body.push('\n');
                std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            }
            Out::new(d.dimension, serde_json::to_value(&d)?)
        }
        Cmd::PdValidate(src) => violations_out(&src.load(false)?.validate()),
        Cmd::Conway(src) => {
            let p = conway_polynomial(&src.load(true)?)?;
            Out::new(&p, json!({"coefficients": p, "text": p.to_string()}))
        }
        Cmd::A2(src) => {
            let v = a2_invariant(&src.load(true)?)?;
            Out::new(v, json!({"a2": v}))
        }
        Cmd::CkApply { src, site, k } => {
            let d = src.load(true)?;
            let mut v = input::read_json(&site, "site")?;
            match (v.get("k").and_then(Value::as_u64), k) {
                (Some(a), Some(b)) if a as usize != b => {
                    return Err(malformed(format!("site has k={a} but --k {b}")));
                }
                (None, Some(b)) => v["k"] = json!(b),
                _ => {}
            }
            let s = input::site(&v.to_string())?;
            let out = apply_ck_template(&d, &s)?.to_json();
            Out::new(out.to_string(), out)
        }
        Cmd::Bracket { src, sites, inv } => {
            let d = src.load(true)?;
            let inv: Invariant = inv.parse().map_err(malformed)?;
            let v = evaluate_bracket(inv, &d, &input::sites(&sites)?)?;
            Out::new(v, json!({"bracket": v}))
        }
        Cmd::DecideCk { k, pd1, pd2 } => {
            let eq = decide_ck(k, &input::pd(&pd1, true)?, &input::pd(&pd2, true)?)?;
            Out::new(eq, json!({"k": k, "equivalent": eq}))
        }
        Cmd::MilnorRep { k } => braid_out(&milnor_representative(k)?),
        Cmd::Verify { seed, budget, timings } => {
            let budget: Budget = budget.parse().map_err(malformed)?;
            let r = verify_suite(seed, budget);
            Out { text: r.render(timings).trim_end().into(), json: r.to_json(timings), ok: r.overall == Status::Pass }
        }
    })
}

fn parse_skeleton(s: &str) -> anyhow::Result<Skeleton> {
    Skeleton::parse(s).ok_or_else(|| malformed(format!("unknown skeleton {s:?}")))
}

fn set_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("CLASPER_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| malformed(format!("CLASPER_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = set_threads().and_then(|_| run(cli.cmd));
    match res {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("json"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            let code = if e.downcast_ref::<Malformed>().is_some() { 2 } else { 1 };
            if cli.json {
                println!("{}", json!({"error": format!("{e:#}"), "exit": code}));
            }
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
