use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use hassett_chow::chow::{dual_graph, heavy_light_presentation, pullback, ChowClass, ChowRing, Polynomial};
use hassett_chow::fan::{build_fan_with, DEFAULT_ELIMINATED};
use hassett_chow::graph_matroid::{flat_edges, one_connected_flats, reduced_weight_graph, Edge, FlatLabel};
use hassett_chow::subset::VertexSet;
use hassett_chow::verify::{verify_instance, verify_sweep, Level};
use hassett_chow::weights::{canonical_form, classify, parse_weights, HeavyLightProfile};
use hassett_chow::Error;

/// Chow rings of heavy/light Hassett spaces, computed exactly.
#[derive(Debug, Parser)]
#[command(name = "hassett", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Comma-separated rational weights, e.g. 1,1,1/10,1/10,1/10
    #[arg(long, short)]
    weights: String,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Heavy/light partition and canonical weights
    Classify(Common),
    /// The reduced weight graph G(w)
    Graph(Common),
    /// The 1-connected flats of the graphic matroid
    Flats(Common),
    /// Rays and cones of the nested-sets fan
    Fan {
        #[command(flatten)]
        common: Common,
        /// Rank-one flat whose coordinate is eliminated, e.g. 2,3
        #[arg(long, value_parser = parse_pair)]
        eliminate: Option<Edge>,
    },
    /// Generators, monomial relations and linear relations
    Present {
        #[command(flatten)]
        common: Common,
        /// Report graded ranks only up to this degree
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Ranks of the graded pieces
    Hilbert {
        #[command(flatten)]
        common: Common,
        /// Stop at this degree
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// Product of homogeneous polynomials such as 'D{2,3}*D{2,3,5}' or 'D{2,4}^2'
    Multiply {
        #[command(flatten)]
        common: Common,
        #[arg(required = true)]
        factors: Vec<String>,
    },
    /// The generator map into the Chow ring of M_0,n and its checks
    Pullback(Common),
    /// Two-vertex dual graphs of the boundary divisors
    Dualgraph {
        #[command(flatten)]
        common: Common,
        /// Only this divisor, e.g. 2,3
        #[arg(long)]
        flat: Option<String>,
    },
    /// Run the invariant suite for one weight vector, or sweep all profiles
    Verify {
        #[arg(long, short)]
        weights: Option<String>,
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

fn parse_pair(s: &str) -> Result<Edge, String> {
    let parts: Vec<usize> =
        s.split(',').map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x}: {e}"))).collect::<Result<_, _>>()?;
    match parts[..] {
        [a, b] if a != b && a >= 2 && b >= 2 => Ok(Edge::new(a, b)),
        _ => Err(format!("expected two distinct labels >= 2, got `{s}`")),
    }
}

fn parse_set(s: &str) -> Result<VertexSet, String> {
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    let items: Vec<usize> =
        s.split(',').map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x}: {e}"))).collect::<Result<_, _>>()?;
    if items.iter().any(|&v| v == 0 || v > hassett_chow::subset::MAX_LABEL) {
        return Err(format!("label out of range in `{s}`"));
    }
    Ok(items.into_iter().collect())
}

enum Failure {
    Invalid(String),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e.weight_error() {
            Some(w) => Failure::Invalid(format!("{}: {w}", w.kind())),
            None => Failure::Invalid(e.to_string()),
        }
    }
}

macro_rules! lib {
    ($e:expr) => {
        $e.map_err(|e| Failure::from(Error::from(e)))
    };
}

fn profile(weights: &str) -> Result<HeavyLightProfile, Failure> {
    let w = lib!(parse_weights(weights))?;
    lib!(classify(&w))
}

fn list(v: impl IntoIterator<Item = usize>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn emit(json: bool, value: Value, text: String) {
    use std::io::Write;
    let body = if json { serde_json::to_string_pretty(&value).expect("JSON values serialize") } else { text };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{body}");
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Classify(c) => {
            let p = profile(&c.weights)?;
            let canon = lib!(canonical_form(&p))?;
            let mut text = format!(
                "heavy: {}\nlight: {}\nm = {}, n = {}\ncanonical: {canon}",
                list(p.heavy().iter().copied()),
                list(p.light().iter().copied()),
                p.m(),
                p.n()
            );
            if !p.is_canonical_order() {
                text.push_str(&format!("\norder: {}", list(p.canonical_order())));
            }
            let value = json!({
                "heavy": p.heavy(),
                "light": p.light(),
                "m": p.m(),
                "n": p.n(),
                "canonical": canon.to_string(),
                "order": p.canonical_order(),
            });
            emit(c.json, value, text);
        }
        Command::Graph(c) => {
            let g = lib!(reduced_weight_graph(&profile(&c.weights)?))?;
            let edges: Vec<String> = g.edges().iter().map(|e| format!("{{{},{}}}", e.0, e.1)).collect();
            let text = format!(
                "vertices: {}\nheavy: {}\nedges ({}): {}",
                list(g.vertices().iter()),
                list(g.heavy_vertices().iter()),
                edges.len(),
                edges.join(" ")
            );
            let value = json!({ "vertices": g.vertices(), "heavy": g.heavy_vertices(), "edges": g.edges() });
            emit(c.json, value, text);
        }
        Command::Flats(c) => {
            let g = lib!(reduced_weight_graph(&profile(&c.weights)?))?;
            let flats = one_connected_flats(&g);
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for l in &flats {
                let edges = flat_edges(&g, *l);
                let shown: Vec<String> = edges.iter().map(|e| format!("{{{},{}}}", e.0, e.1)).collect();
                lines.push(format!("{l}  rank {}  edges {}", l.rank(), shown.join(" ")));
                items.push(json!({ "flat": l, "rank": l.rank(), "edges": edges }));
            }
            emit(c.json, Value::Array(items), lines.join("\n"));
        }
        Command::Fan { common, eliminate } => {
            let p = profile(&common.weights)?;
            let f = lib!(build_fan_with(&p, eliminate.unwrap_or(DEFAULT_ELIMINATED)))?;
            let basis: Vec<String> = f.coordinates().basis().map(|e| format!("v{}{}", e.0, e.1)).collect();
            let mut text = format!("coordinates: ({})\n", basis.join(", "));
            for (l, r) in f.labels().iter().zip(f.rays()) {
                text.push_str(&format!("ray {l}: ({})\n", r.0.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")));
            }
            for d in 2..=f.max_dim() {
                for c in f.cones(d) {
                    let labels: Vec<String> = f.cone_labels(c).iter().map(|l| l.to_string()).collect();
                    text.push_str(&format!("cone {}\n", labels.join(" ")));
                }
            }
            text.push_str(&format!("f-vector: {}", list(f.f_vector())));
            emit(common.json, f.to_json(), text);
        }
        Command::Present { common, max_degree } => {
            let p = profile(&common.weights)?;
            let ring = ChowRing::new(lib!(heavy_light_presentation(&p))?);
            let h = hilbert(&ring, max_degree)?;
            let pres = ring.presentation();
            let gens: Vec<String> = pres.generators().iter().map(|g| format!("D^{g}")).collect();
            let mut text = format!("weights: {}\ngenerators ({}): {}\n", pres.weights(), gens.len(), gens.join(" "));
            text.push_str(&format!("monomial relations ({}):\n", pres.sr_pairs().len()));
            for &(a, b) in pres.sr_pairs() {
                text.push_str(&format!("  {}*{} = 0\n", gens[a], gens[b]));
            }
            text.push_str(&format!("linear relations ({}):\n", pres.linear_relations().len()));
            for r in pres.linear_relations() {
                text.push_str(&format!("  {}\n", pres.format_relation(r)));
            }
            text.push_str(&format!("hilbert: {}", h.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")));
            emit(common.json, pres.to_json(Some(&h)), text);
        }
        Command::Hilbert { common, max_degree } => {
            let p = profile(&common.weights)?;
            let ring = ChowRing::new(lib!(heavy_light_presentation(&p))?);
            let h = hilbert(&ring, max_degree)?;
            let value = json!({ "weights": ring.presentation().weights(), "hilbert": h });
            emit(common.json, value, h.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
        }
        Command::Multiply { common, factors } => {
            let p = profile(&common.weights)?;
            let ring = ChowRing::new(lib!(heavy_light_presentation(&p))?);
            let mut acc: Option<ChowClass> = None;
            for text in &factors {
                let poly = lib!(Polynomial::parse(text, ring.presentation()))?;
                let class = lib!(ring.reduce(&poly))?;
                acc = Some(match acc {
                    None => class,
                    Some(a) => lib!(ring.multiply(&a, &class))?,
                });
            }
            let class = acc.expect("clap requires one factor");
            let mut value = ring.class_to_json(&class);
            let mut text = format!("degree {}: {}", class.degree(), ring.format_class(&class));
            if class.degree() == ring.top_degree() {
                let d = lib!(ring.integral_degree(&class))?;
                text.push_str(&format!("\nintegral degree: {d}"));
                value["integral_degree"] = json!(d.to_string());
            }
            emit(common.json, value, text);
        }
        Command::Pullback(c) => {
            let p = profile(&c.weights)?;
            let r = lib!(pullback(&p))?;
            let mut text = String::new();
            for (a, b) in &r.generator_map {
                text.push_str(&format!("D^{a} -> D^{b}\n"));
            }
            let missed: Vec<String> = r.missed.iter().map(|g| format!("D^{g}")).collect();
            text.push_str(&format!("not in image ({}): {}\n", missed.len(), missed.join(" ")));
            text.push_str(&format!("relations checked: {}\n", r.relations_checked));
            text.push_str(&format!("hilbert: {}\n", join(&r.source_hilbert)));
            text.push_str(&format!("image ranks: {}\n", join(&r.image_ranks)));
            text.push_str(&format!("injective: {}", if r.is_injective() { "yes" } else { "no" }));
            emit(c.json, r.to_json(), text);
        }
        Command::Dualgraph { common, flat } => {
            let p = profile(&common.weights)?;
            let g = lib!(reduced_weight_graph(&p))?;
            let w = lib!(canonical_form(&p))?;
            let labels: Vec<FlatLabel> = match flat {
                Some(s) => {
                    let set = parse_set(&s).map_err(Failure::Invalid)?;
                    let l = FlatLabel::new(&g, set)
                        .ok_or_else(|| Failure::Invalid(format!("{set} is not a divisor label for these weights")))?;
                    vec![l]
                }
                None => one_connected_flats(&g),
            };
            let mut lines = Vec::new();
            let mut items = Vec::new();
            for l in labels {
                let d = dual_graph(l, p.n());
                lines.push(format!("D^{l}: {d}"));
                items.push(json!({ "flat": l, "graph": d.to_json(), "stable": d.is_stable(&w) }));
            }
            emit(common.json, Value::Array(items), lines.join("\n"));
        }
        Command::Verify { weights, level, json } => {
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let report = match weights {
                Some(w) => verify_instance(&profile(&w)?, level)?,
                None => verify_sweep(level)?,
            };
            emit(json, report.to_json(), report.to_string());
            if !report.all_passed() {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn hilbert(ring: &ChowRing, max_degree: Option<usize>) -> Result<Vec<usize>, Failure> {
    let top = ring.top_degree();
    let upto = max_degree.unwrap_or(top);
    if upto > top {
        return Err(Failure::Invalid(format!("--max-degree {upto} exceeds the top degree {top}")));
    }
    (0..=upto).map(|k| lib!(ring.basis(k)).map(|b| b.len())).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verify) => ExitCode::from(3),
    }
}
