use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use serde_json::{json, Value};
use sumcol::sumset::{MinColoursOutcome, SearchOutcome};
use sumcol::verifier::{default_sample, layer_sample, obstruction_demo_in};
use sumcol::{
    all_colourings_forced, check_coset_uniqueness, enumerate_sample, find_mono_pair_sumset,
    find_mono_triples, has_order_four, min_colours_avoiding, AmbientElement, AmbientSignature,
    CanonicalDecomposition, ColouringTable, EmbeddingMap, FiniteGroupSpec, FreeMode, Layer,
    LayerMask, MinColours, Presentation, SampleSpec, SweepOptions, Verdict, VerifyError,
};

use crate::args::{
    AnalyzeArgs, ColourArgs, DemoArgs, EmbedArgs, LayerArg, ModeArg, Preset, SearchArgs,
    SourceArgs, VerifyArgs,
};
use crate::{presentation_file, read_input, CliError, Outcome, Status};

/// Largest group the order-4 demo will scan pairwise.
const DEMO_GROUP_CAP: usize = 1 << 12;

/// Integers as JSON numbers when they fit, strings otherwise.
fn number(n: impl ToString) -> Value {
    let s = n.to_string();
    s.parse::<i64>()
        .map(Value::from)
        .or_else(|_| s.parse::<u64>().map(Value::from))
        .unwrap_or(Value::String(s))
}

struct Analysis {
    report: Value,
    decomposition: CanonicalDecomposition,
    order_four: bool,
}

fn analyze_file(path: &Path) -> Result<Analysis, CliError> {
    let text = read_input(path)?;
    let file = presentation_file::parse(&text).map_err(|source| CliError::File {
        path: path.to_path_buf(),
        source,
    })?;
    let p = Presentation::new(file.generators, file.relations.clone())?;
    let d = p.canonical_decomposition()?;
    let order_four = has_order_four(&d);
    let report = json!({
        "command": "analyze",
        "config": { "input": path.display().to_string() },
        "generators": file.generators,
        "relations": file.relations,
        "smith_diagonal": p.invariant_factors().iter().map(number).collect::<Vec<_>>(),
        "invariant_factors": d.invariant_factors().iter().map(number).collect::<Vec<_>>(),
        "free_rank": d.free_rank(),
        "primary_factors": d.primary_factors().iter().map(|f| json!({
            "prime": f.prime,
            "exponent": f.exponent,
            "order": number(f.order()),
        })).collect::<Vec<_>>(),
        "decomposition": d.to_string(),
        "has_order_four": order_four,
        "verdict": if order_four { "order-4 present" } else { "4-free" },
    });
    Ok(Analysis {
        report,
        decomposition: d,
        order_four,
    })
}

fn refusal(path: &Path, a: Analysis) -> Outcome {
    Outcome {
        notes: vec![format!(
            "refusing: {} ({}) has an element of order 4",
            path.display(),
            a.decomposition
        )],
        report: a.report,
        status: Status::OrderFour,
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Outcome, CliError> {
    let a = analyze_file(&args.input)?;
    let verdict = if a.order_four {
        "order-4 present"
    } else {
        "4-free"
    };
    Ok(Outcome {
        notes: vec![format!(
            "{}: {} ({verdict})",
            args.input.display(),
            a.decomposition
        )],
        status: if a.order_four {
            Status::OrderFour
        } else {
            Status::Success
        },
        report: a.report,
    })
}

pub fn embed(args: &EmbedArgs) -> Result<Outcome, CliError> {
    let a = analyze_file(&args.input)?;
    if a.order_four {
        return Ok(refusal(&args.input, a));
    }
    let map = EmbeddingMap::build(&a.decomposition, args.free_mode.into())?;
    let report = json!({
        "command": "embed",
        "config": { "input": args.input.display().to_string(), "free_mode": args.free_mode },
        "embedding": map.describe(),
    });
    Ok(Outcome {
        report,
        notes: vec![],
        status: Status::Success,
    })
}

struct Ambient {
    signature: Arc<AmbientSignature>,
    source: Value,
    /// Prüfer depth used when none is given.
    default_depth: u32,
}

enum Resolved {
    Ambient(Ambient),
    Refused(Outcome),
}

fn resolve(source: &SourceArgs) -> Result<Resolved, CliError> {
    let mode_override = source.free_mode.map(FreeMode::from);
    if let Some(path) = &source.input {
        let a = analyze_file(path)?;
        if a.order_four {
            return Ok(Resolved::Refused(refusal(path, a)));
        }
        let map = EmbeddingMap::build(&a.decomposition, mode_override.unwrap_or_default())?;
        let depth = a
            .decomposition
            .primary_factors()
            .iter()
            .filter(|f| f.prime != 2)
            .map(|f| f.exponent)
            .max()
            .unwrap_or(1);
        return Ok(Resolved::Ambient(Ambient {
            signature: map.signature().clone(),
            source: json!({
                "kind": "presentation",
                "input": path.display().to_string(),
                "decomposition": a.decomposition.to_string(),
            }),
            default_depth: depth,
        }));
    }
    let (signature, kind) = match &source.signature {
        Some(text) => (AmbientSignature::parse(text)?, "signature"),
        None => (default_sample().signature, "default"),
    };
    let signature = match mode_override {
        Some(m) => signature.with_free_mode(m),
        None => signature,
    };
    Ok(Resolved::Ambient(Ambient {
        signature,
        source: json!({ "kind": kind }),
        default_depth: 2,
    }))
}

fn mask_without(layers: &[LayerArg]) -> (LayerMask, Vec<LayerArg>) {
    let mut dropped = layers.to_vec();
    dropped.sort();
    dropped.dedup();
    let mask = dropped
        .iter()
        .fold(LayerMask::ALL, |m, &l| m.without(Layer::from(l)));
    (mask, dropped)
}

fn source_config(source: &SourceArgs) -> Value {
    json!({
        "input": source.input.as_ref().map(|p| p.display().to_string()),
        "signature": source.signature,
        "free_mode": source.free_mode,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

pub fn colour(args: &ColourArgs) -> Result<Outcome, CliError> {
    let ambient = match resolve(&args.source)? {
        Resolved::Ambient(a) => a,
        Resolved::Refused(o) => return Ok(o),
    };
    let (mask, dropped) = mask_without(&args.drop_layer);
    let colours = args
        .elements
        .iter()
        .map(|text| {
            let a = AmbientElement::parse(text, &ambient.signature)?;
            Ok(json!({ "element": a.to_string(), "colour": mask.colour(&a).encode() }))
        })
        .collect::<Result<Vec<Value>, CliError>>()?;
    let report = json!({
        "command": "colour",
        "config": merge(source_config(&args.source), json!({ "drop_layer": dropped })),
        "source": ambient.source,
        "signature": ambient.signature.to_string(),
        "colours": colours,
    });
    Ok(Outcome {
        report,
        notes: vec![],
        status: Status::Success,
    })
}

fn preset_spec(p: Preset) -> SampleSpec {
    match p {
        Preset::Default => default_sample(),
        Preset::Halvable => layer_sample(Layer::Halvable),
        Preset::D => layer_sample(Layer::DProfile),
        Preset::Y => layer_sample(Layer::YProfile),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<Outcome, CliError> {
    if args.parallel == 0 {
        return Err(CliError::Usage("--parallel must be at least 1".into()));
    }
    let s = &args.sample;
    let (signature, source, depth, b, c) = match s.sample {
        Some(p) => {
            let spec = preset_spec(p);
            let signature = match args.source.free_mode {
                Some(m) => spec.signature.with_free_mode(m.into()),
                None => spec.signature.clone(),
            };
            let source = json!({ "kind": "preset", "sample": p });
            (
                signature,
                source,
                spec.prufer_depth,
                spec.q_numerator_bound,
                spec.q_denominator_bound,
            )
        }
        None => match resolve(&args.source)? {
            Resolved::Ambient(a) => (a.signature, a.source, a.default_depth, 2, 2),
            Resolved::Refused(o) => return Ok(o),
        },
    };
    let depth = s.prufer_depth.unwrap_or(depth);
    let b = s.q_bound.unwrap_or(b);
    let c = s.q_den_bound.unwrap_or(c);
    let mut spec = match s.mode {
        ModeArg::Exhaustive => SampleSpec::exhaustive(signature, depth, b, c),
        ModeArg::Random => {
            if s.count > s.cap {
                return Err(VerifyError::CapExceeded {
                    size: s.count as u128,
                    cap: s.cap,
                }
                .into());
            }
            SampleSpec::random(signature, depth, b, c, s.count, s.seed)
        }
    };
    spec.cap = s.cap;

    let elements = enumerate_sample(&spec)?;
    let (mask, dropped) = mask_without(&args.drop_layer);
    let opts = SweepOptions {
        threads: args.parallel,
        violation_limit: args.violation_limit,
    };
    let triples = find_mono_triples(&elements, |a| mask.colour(a), opts)?;
    let cosets = check_coset_uniqueness(&elements);
    let clean = triples.is_clean() && cosets.passed();

    let config = merge(
        source_config(&args.source),
        json!({
            "sample": s.sample,
            "prufer_depth": depth,
            "q_bound": b,
            "q_den_bound": c,
            "mode": s.mode,
            "count": s.count,
            "seed": s.seed,
            "cap": s.cap,
            "parallel": args.parallel,
            "drop_layer": dropped,
            "violation_limit": args.violation_limit,
        }),
    );
    let layers: Vec<&str> = [
        (mask.d_profile, "d"),
        (mask.y_profile, "y"),
        (mask.halvable, "halvable"),
    ]
    .into_iter()
    .filter_map(|(on, name)| on.then_some(name))
    .collect();
    let notes = vec![format!(
        "{} elements, {} pairs, {} violations, coset check {} ({} ms)",
        triples.sample_size,
        triples.pair_count,
        triples.violation_count,
        if cosets.passed() { "passed" } else { "failed" },
        triples.elapsed_ms
    )];
    let report = json!({
        "command": "verify",
        "config": config,
        "source": source,
        "sample": spec.describe(),
        "layers": layers,
        "triples": triples,
        "cosets": cosets,
        "verdict": if clean { "clean" } else { "violations" },
    });
    Ok(Outcome {
        report,
        notes,
        status: if clean {
            Status::Success
        } else {
            Status::Violations
        },
    })
}

pub fn demo(args: &DemoArgs) -> Result<Outcome, CliError> {
    let g = FiniteGroupSpec::with_cap(args.group.clone(), DEMO_GROUP_CAP)?;
    let transcript = obstruction_demo_in(&g);
    let notes = transcript.lines.clone();
    let report = json!({
        "command": "demo",
        "config": { "group": args.group },
        "transcript": transcript,
    });
    Ok(Outcome {
        report,
        notes,
        status: Status::Success,
    })
}

fn witness_json(g: &FiniteGroupSpec, w: &ColouringTable) -> Result<Value, CliError> {
    Ok(json!({
        "table": w.colours(),
        "elements": (0..g.size()).map(|i| json!({ "element": g.format(i), "colour": w.colour_of(i) })).collect::<Vec<_>>(),
        "verified": find_mono_pair_sumset(g, w)?.is_none(),
    }))
}

pub fn search(args: &SearchArgs) -> Result<Outcome, CliError> {
    let g = FiniteGroupSpec::new(args.group.clone())?;
    let start = Instant::now();
    let (body, nodes, unknown) = if args.min {
        let MinColoursOutcome { result, nodes } = min_colours_avoiding(&g, args.budget);
        match result {
            MinColours::Found { colours, witness } => (
                json!({ "verdict": "found", "min_colours": colours, "witness": witness_json(&g, &witness)? }),
                nodes,
                false,
            ),
            MinColours::Unknown { lower_bound } => (
                json!({ "verdict": "unknown", "min_colours": null, "lower_bound": lower_bound, "witness": null }),
                nodes,
                true,
            ),
        }
    } else {
        let SearchOutcome { verdict, nodes } =
            all_colourings_forced(&g, args.colours, args.budget)?;
        let witness = match &verdict {
            Verdict::NotForced(w) => witness_json(&g, w)?,
            _ => Value::Null,
        };
        (
            json!({ "verdict": verdict.label(), "colours": args.colours, "witness": witness }),
            nodes,
            verdict == Verdict::Unknown,
        )
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    let verdict = body["verdict"].as_str().unwrap_or_default().to_string();
    let report = merge(
        json!({
            "command": "search",
            "config": {
                "group": args.group,
                "colours": (!args.min).then_some(args.colours),
                "min": args.min,
                "budget": args.budget,
            },
            "group": g.to_string(),
        }),
        merge(body, json!({ "nodes": nodes, "elapsed_ms": elapsed_ms })),
    );
    Ok(Outcome {
        report,
        notes: vec![format!("{g}: {verdict} after {nodes} assignments")],
        status: if unknown {
            Status::Exceeded
        } else {
            Status::Success
        },
    })
}
