//! Command-line surface: catalog browsing, generation, evaluation,
//! verification, digit extraction, zero-relation checking, and a reduced
//! self-test. Every command has a `--json` mode that emits one
//! machine-readable document; identical invocations produce byte-identical
//! output.

use crate::digits::{extract_bits_auto, extract_constant_auto, DigitsError};
use crate::exact::Real;
use crate::generators::{catalog, gen_degree1, gen_degree2, gen_family, FamilyId, GenError};
use crate::pformula::{agreement_bits, eval_p, is_zero_relation, serialize_scaled, serialize_zero};
use crate::reference as reference_mod;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "bbp",
    version,
    about = "Binary BBP-type formulas: generate, verify, extract digits"
)]
struct Cli {
    /// Worker threads for evaluation and extraction (default: rayon's choice)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Emit one machine-readable JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog formulas (and family slugs with --families)
    List {
        /// Show the generator family identifiers instead
        #[arg(long)]
        families: bool,
    },
    /// Print the serialized formula document for a catalog entry
    Show { name: String },
    /// Generate a family instance as a formula document
    Gen(GenArgs),
    /// Evaluate a catalog formula to a given precision
    Eval {
        name: String,
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Check a catalog identity: left-hand side against the P-series
    Verify {
        name: String,
        #[arg(long)]
        bits: Option<u32>,
        /// Minimum bits of agreement to count as PASS (default bits - 16)
        #[arg(long)]
        min_agree: Option<i64>,
    },
    /// Extract hex digits at a bit offset without computing earlier ones
    Digits {
        name: String,
        /// Bit offset to start at
        #[arg(long, default_value_t = 0)]
        pos: u64,
        /// Number of hex digits
        #[arg(long, default_value_t = 16)]
        count: u32,
    },
    /// Evaluate a zero relation and report the margin
    ZeroCheck {
        name: String,
        #[arg(long)]
        bits: Option<u32>,
    },
    /// Run the reduced acceptance checks
    Selftest,
}

#[derive(Args)]
struct GenArgs {
    /// Family slug (see `list --families`)
    #[arg(long)]
    family: String,
    /// Degree s; 1 and 2 use the closed-form left-hand sides
    #[arg(long, default_value_t = 1)]
    degree: u32,
    /// Odd family parameter p (base is 2^(12p))
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=99))]
    p: u32,
    /// Keep the polylog sum as the left-hand side even for degree 1 or 2
    #[arg(long)]
    polylog_lhs: bool,
}

fn default_bits() -> u32 {
    std::env::var("BBP_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(256)
}

#[derive(Serialize)]
struct ListEntry {
    name: String,
    kind: &'static str,
    degree: u32,
    base_log2: u32,
    length: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u32>,
    lhs: Option<String>,
}

#[derive(Serialize)]
struct ListDoc {
    command: &'static str,
    version: &'static str,
    formulas: Vec<ListEntry>,
}

#[derive(Serialize)]
struct FamilyEntry {
    slug: &'static str,
    part: &'static str,
    angle_pair: &'static str,
    combination: &'static str,
    sqrt3_prefactor: bool,
}

#[derive(Serialize)]
struct FamiliesDoc {
    command: &'static str,
    version: &'static str,
    families: Vec<FamilyEntry>,
}

#[derive(Serialize)]
struct EvalDoc {
    command: &'static str,
    version: &'static str,
    name: String,
    bits: u32,
    decimal: String,
    hex: String,
    radius_log2: Option<i64>,
}

#[derive(Serialize)]
struct VerifyDoc {
    command: &'static str,
    version: &'static str,
    name: String,
    bits: u32,
    lhs: String,
    rhs: String,
    agreement_bits: i64,
    min_agree: i64,
    pass: bool,
}

#[derive(Serialize)]
struct DigitsDoc {
    command: &'static str,
    version: &'static str,
    name: String,
    offset: u64,
    count: u32,
    hex: String,
    guard_margin_bits: i64,
}

#[derive(Serialize)]
struct ZeroDoc {
    command: &'static str,
    version: &'static str,
    name: String,
    bits: u32,
    value_bound_log2: Option<i64>,
    radius_log2: Option<i64>,
    pass: bool,
}

#[derive(Serialize)]
struct SelftestDoc {
    command: &'static str,
    version: &'static str,
    results: Vec<SelftestLine>,
    pass: bool,
}

#[derive(Serialize)]
struct SelftestLine {
    check: String,
    pass: bool,
    detail: String,
}

fn print_json<T: Serialize>(doc: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(doc).expect("serializable")
    );
}

/// Run the CLI; returns a process exit code.
pub fn run<I: IntoIterator<Item = String>>(args: I) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // clap renders its own message; usage problems exit 2
            let code = if e.exit_code() == 0 { 0 } else { EXIT_USAGE };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.workers {
        // ignore failure if a global pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run_command(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            msg.1
        }
    }
}

struct CmdError(String, i32);

impl std::fmt::Display for CmdError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

impl CmdError {
    fn usage(msg: impl Into<String>) -> CmdError {
        CmdError(msg.into(), EXIT_USAGE)
    }
    fn numeric(msg: impl Into<String>) -> CmdError {
        CmdError(msg.into(), EXIT_NUMERIC)
    }
}

fn run_command(cli: &Cli) -> Result<i32, CmdError> {
    match &cli.command {
        Command::List { families } => {
            if *families {
                list_families(cli.json);
            } else {
                list_formulas(cli.json);
            }
            Ok(EXIT_OK)
        }
        Command::Show { name } => show(name, cli.json),
        Command::Gen(args) => gen(args, cli.json),
        Command::Eval { name, bits } => eval(name, bits.unwrap_or_else(default_bits), cli.json),
        Command::Verify {
            name,
            bits,
            min_agree,
        } => verify(
            name,
            bits.unwrap_or_else(default_bits),
            *min_agree,
            cli.json,
        ),
        Command::Digits { name, pos, count } => digits(name, *pos, *count, cli.json),
        Command::ZeroCheck { name, bits } => {
            zero_check(name, bits.unwrap_or_else(default_bits), cli.json)
        }
        Command::Selftest => Ok(selftest(cli.json)),
    }
}

fn list_formulas(json: bool) {
    let cat = catalog();
    let mut formulas: Vec<ListEntry> = cat
        .scaled
        .iter()
        .map(|sf| ListEntry {
            name: sf.name.clone(),
            kind: "identity",
            degree: sf.formula.degree(),
            base_log2: sf.formula.base_log2(),
            length: sf.formula.length(),
            p: sf.p_param,
            lhs: Some(sf.lhs.serialize()),
        })
        .collect();
    formulas.extend(cat.zeros.iter().map(|z| ListEntry {
        name: z.name.clone(),
        kind: "zero-relation",
        degree: z.formula.degree(),
        base_log2: z.formula.base_log2(),
        length: z.formula.length(),
        p: None,
        lhs: None,
    }));
    if json {
        print_json(&ListDoc {
            command: "list",
            version: VERSION,
            formulas,
        });
        return;
    }
    println!(
        "{:<24} {:<14} {:>6} {:>6} {:>4}  LHS",
        "NAME", "KIND", "DEGREE", "BASE", "P"
    );
    for f in formulas {
        println!(
            "{:<24} {:<14} {:>6} {:>6} {:>4}  {}",
            f.name,
            f.kind,
            f.degree,
            format!("2^{}", f.base_log2),
            f.p.map(|p| p.to_string()).unwrap_or_else(|| "-".into()),
            f.lhs.unwrap_or_else(|| "-".into())
        );
    }
}

fn list_families(json: bool) {
    let families: Vec<FamilyEntry> = FamilyId::ALL
        .into_iter()
        .map(|id| FamilyEntry {
            slug: id.slug(),
            part: match id.part() {
                crate::generators::LiPart::Re => "Re",
                crate::generators::LiPart::Im => "Im",
            },
            angle_pair: match id.pair() {
                crate::generators::AnglePair::A => "pi/12, 7pi/12",
                crate::generators::AnglePair::B => "5pi/12, 11pi/12",
            },
            combination: match id.combination() {
                crate::generators::Combination::Sum => "sum",
                crate::generators::Combination::Diff => "difference",
            },
            sqrt3_prefactor: id.has_sqrt3_prefactor(),
        })
        .collect();
    if json {
        print_json(&FamiliesDoc {
            command: "list-families",
            version: VERSION,
            families,
        });
        return;
    }
    println!(
        "{:<12} {:<4} {:<16} {:<12} SQRT3",
        "SLUG", "PART", "ANGLES", "COMBINATION"
    );
    for f in families {
        println!(
            "{:<12} {:<4} {:<16} {:<12} {}",
            f.slug, f.part, f.angle_pair, f.combination, f.sqrt3_prefactor
        );
    }
}

fn show(name: &str, _json: bool) -> Result<i32, CmdError> {
    let cat = catalog();
    if let Some(sf) = cat.find_scaled(name) {
        print!("{}", serialize_scaled(sf));
        return Ok(EXIT_OK);
    }
    if let Some(z) = cat.find_zero(name) {
        print!("{}", serialize_zero(z));
        return Ok(EXIT_OK);
    }
    Err(CmdError::usage(format!("no catalog entry named '{name}'")))
}

fn gen(args: &GenArgs, _json: bool) -> Result<i32, CmdError> {
    let id = FamilyId::from_slug(&args.family).map_err(|e| CmdError::usage(e.to_string()))?;
    let result = if args.polylog_lhs {
        gen_family(id, args.degree, args.p)
    } else {
        match args.degree {
            1 => gen_degree1(id, args.p),
            2 => {
                // the Cl2-form exists for the Im families; Re stays polylog
                let deg2_index = match id {
                    FamilyId::ImSumA => Some(1),
                    FamilyId::ImDiffA => Some(2),
                    FamilyId::ImSumB => Some(3),
                    FamilyId::ImDiffB => Some(4),
                    _ => None,
                };
                match deg2_index {
                    Some(ix) => gen_degree2(ix, args.p),
                    None => gen_family(id, 2, args.p),
                }
            }
            s => gen_family(id, s, args.p),
        }
    };
    match result {
        Ok(sf) => {
            print!("{}", serialize_scaled(&sf));
            Ok(EXIT_OK)
        }
        Err(e @ GenError::EvenP) => Err(CmdError::usage(e.to_string())),
        Err(e) => Err(CmdError::usage(e.to_string())),
    }
}

fn value_doc(name: &str, bits: u32, v: &Real) -> EvalDoc {
    let digits = (bits as u64 * 30103 / 100000) as u32 + 2;
    EvalDoc {
        command: "eval",
        version: VERSION,
        name: name.to_string(),
        bits,
        decimal: v.to_decimal_string(digits),
        hex: v.to_hex_string(bits / 4 + 1),
        radius_log2: v.radius_log2(),
    }
}

fn eval(name: &str, bits: u32, json: bool) -> Result<i32, CmdError> {
    let cat = catalog();
    let value = if let Some(sf) = cat.find_scaled(name) {
        sf.eval_rhs(bits)
    } else if let Some(z) = cat.find_zero(name) {
        eval_p(&z.formula, bits)
    } else {
        return Err(CmdError::usage(format!("no catalog entry named '{name}'")));
    };
    let doc = value_doc(name, bits, &value);
    if json {
        print_json(&doc);
    } else {
        println!("formula: {name}");
        println!("bits:    {bits}");
        println!("value:   {}", doc.decimal);
        println!("hex:     {}", doc.hex);
        match doc.radius_log2 {
            Some(r) => println!("radius:  <= 2^{r}"),
            None => println!("radius:  exact"),
        }
    }
    Ok(EXIT_OK)
}

fn verify(name: &str, bits: u32, min_agree: Option<i64>, json: bool) -> Result<i32, CmdError> {
    let cat = catalog();
    // zero relations verify as the identity 0 = P
    let (lhs, rhs) = if let Some(sf) = cat.find_scaled(name) {
        let lhs = sf
            .eval_lhs(bits)
            .map_err(|e| CmdError::numeric(e.to_string()))?;
        (lhs, sf.eval_rhs(bits))
    } else if let Some(z) = cat.find_zero(name) {
        (Real::zero(bits), eval_p(&z.formula, bits))
    } else {
        return Err(CmdError::usage(format!("no identity named '{name}'")));
    };
    let agreement = agreement_bits(&lhs, &rhs);
    let threshold = min_agree.unwrap_or(bits as i64 - 16);
    let pass = agreement >= threshold;
    let digits = (bits as u64 * 30103 / 100000) as u32 + 2;
    let doc = VerifyDoc {
        command: "verify",
        version: VERSION,
        name: name.to_string(),
        bits,
        lhs: lhs.to_decimal_string(digits),
        rhs: rhs.to_decimal_string(digits),
        agreement_bits: agreement,
        min_agree: threshold,
        pass,
    };
    if json {
        print_json(&doc);
    } else {
        println!("formula:   {name}");
        println!("bits:      {bits}");
        println!("lhs:       {}", doc.lhs);
        println!("rhs:       {}", doc.rhs);
        println!(
            "agreement: {} bits (need {})",
            doc.agreement_bits, doc.min_agree
        );
        println!("{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

fn digits(name: &str, pos: u64, count: u32, json: bool) -> Result<i32, CmdError> {
    let cat = catalog();
    let run = if let Some(sf) = cat.find_scaled(name) {
        extract_constant_auto(sf, pos, count)
    } else if let Some(z) = cat.find_zero(name) {
        extract_bits_auto(&z.formula, pos, count, &z.name)
    } else {
        return Err(CmdError::usage(format!("no catalog entry named '{name}'")));
    };
    let run = run.map_err(|e| match e {
        DigitsError::CarryAmbiguity { .. } => CmdError::numeric(e.to_string()),
        DigitsError::Invalid(_) => CmdError::usage(e.to_string()),
    })?;
    let doc = DigitsDoc {
        command: "digits",
        version: VERSION,
        name: name.to_string(),
        offset: pos,
        count,
        hex: run.hex_digits.clone(),
        guard_margin_bits: run.guard_margin_bits,
    };
    if json {
        print_json(&doc);
    } else {
        println!("formula: {name}");
        println!("offset:  bit {pos}");
        println!("hex:     0x.{}", doc.hex);
        println!("margin:  {} guard bits", doc.guard_margin_bits);
    }
    Ok(EXIT_OK)
}

fn zero_check(name: &str, bits: u32, json: bool) -> Result<i32, CmdError> {
    let cat = catalog();
    let formula = if let Some(z) = cat.find_zero(name) {
        z.formula.clone()
    } else if let Some(sf) = cat.find_scaled(name) {
        sf.formula.clone()
    } else {
        return Err(CmdError::usage(format!("no catalog entry named '{name}'")));
    };
    let (pass, report) = is_zero_relation(&formula, bits);
    let doc = ZeroDoc {
        command: "zero-check",
        version: VERSION,
        name: name.to_string(),
        bits,
        value_bound_log2: report.value_bound_log2,
        radius_log2: report.radius_log2,
        pass,
    };
    if json {
        print_json(&doc);
    } else {
        println!("formula: {name}");
        println!("bits:    {bits}");
        match doc.value_bound_log2 {
            Some(b) => println!("|value|: <= 2^{b}"),
            None => println!("|value|: exactly 0"),
        }
        match doc.radius_log2 {
            Some(r) => println!("radius:  <= 2^{r}"),
            None => println!("radius:  exact"),
        }
        println!("{}", if pass { "PASS" } else { "FAIL" });
    }
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAIL })
}

fn selftest(json: bool) -> i32 {
    let mut results: Vec<SelftestLine> = Vec::new();
    let mut push = |check: &str, pass: bool, detail: String| {
        results.push(SelftestLine {
            check: check.to_string(),
            pass,
            detail,
        });
    };

    // families at reduced precision
    {
        let mut worst = i64::MAX;
        let mut ok = true;
        for id in FamilyId::ALL {
            for s in [1u32, 2] {
                for p in [1u32, 3] {
                    match gen_family(id, s, p).map(|sf| sf.verify(128)) {
                        Ok(Ok(a)) => {
                            worst = worst.min(a);
                            ok &= a >= 96;
                        }
                        _ => ok = false,
                    }
                }
            }
        }
        push(
            "families",
            ok,
            format!("8 families, s in {{1,2}}, p in {{1,3}}, worst agreement {worst} bits"),
        );
    }
    // degree-1 closed forms
    {
        let mut worst = i64::MAX;
        let mut ok = true;
        for id in FamilyId::ALL {
            for p in [1u32, 3] {
                match gen_degree1(id, p).map(|sf| sf.verify(128)) {
                    Ok(Ok(a)) => {
                        worst = worst.min(a);
                        ok &= a >= 96;
                    }
                    _ => ok = false,
                }
            }
        }
        push("degree1", ok, format!("worst agreement {worst} bits"));
    }
    // degree-2 identities
    {
        let mut worst = i64::MAX;
        let mut ok = true;
        for ix in 1..=4u8 {
            match gen_degree2(ix, 1).map(|sf| sf.verify(128)) {
                Ok(Ok(a)) => {
                    worst = worst.min(a);
                    ok &= a >= 80;
                }
                _ => ok = false,
            }
        }
        push(
            "degree2",
            ok,
            format!("p = 1, worst agreement {worst} bits"),
        );
    }
    // catalog identities
    {
        let cat = catalog();
        let mut worst = i64::MAX;
        let mut ok = true;
        for sf in &cat.scaled {
            match sf.verify(160) {
                Ok(a) => {
                    worst = worst.min(a);
                    ok &= a >= 128;
                }
                Err(_) => ok = false,
            }
        }
        push(
            "catalog",
            ok,
            format!("10 identities, worst agreement {worst} bits"),
        );
    }
    // zero relations
    {
        let cat = catalog();
        let mut ok = true;
        let mut worst: i64 = i64::MIN;
        for z in &cat.zeros {
            let v = eval_p(&z.formula, 128);
            let bound = v.abs_log2_upper().unwrap_or(i64::MIN);
            worst = worst.max(bound);
            ok &= v.abs_bounded_by_pow2(-112);
        }
        push(
            "zero-relations",
            ok,
            format!("five relations, |value| <= 2^{worst}"),
        );
    }
    // parity gate
    {
        let even_fails = [2u32, 4, 6]
            .iter()
            .all(|&p| gen_family(FamilyId::ImSumA, 1, p) == Err(GenError::EvenP));
        let odd_ok = [1u32, 3, 5, 7, 9]
            .iter()
            .all(|&p| gen_family(FamilyId::ReDiffB, 2, p).is_ok());
        push(
            "parity-gate",
            even_fails && odd_ok,
            "even p rejected, odd p generates".into(),
        );
    }
    // digit extraction vs direct evaluation
    {
        let cat = catalog();
        let mut ok = true;
        for sf in &cat.scaled {
            let direct = sf.eval_rhs(800);
            for t in [0u64, 40] {
                let run = extract_constant_auto(sf, t, 8);
                let oracle = crate::digits::digits_of_real(&direct, t, 8, "direct");
                match (run, oracle) {
                    (Ok(a), Ok(b)) => ok &= a.hex_digits == b.hex_digits,
                    _ => ok = false,
                }
            }
        }
        push("digits", ok, "catalog entries at offsets 0 and 40".into());
    }
    // Clausen / Bernoulli machinery
    {
        let dup = reference_mod::cl_duplication_check(2, 2, &reference_mod::Angle::of(1, 6), 64)
            .unwrap_or(false)
            && reference_mod::cl_duplication_check(3, 2, &reference_mod::Angle::of(1, 3), 64)
                .unwrap_or(false);
        let gl = {
            let v = reference_mod::gl_closed(1, &reference_mod::Angle::zero(), 64);
            let z2 = reference_mod::pi(64)
                .mul(&reference_mod::pi(64))
                .mul_rational(&crate::exact::rat(1, 6));
            v.sub(&z2).abs_bounded_by_pow2(-56)
        };
        let bern = reference_mod::bernoulli_number(12) == crate::exact::rat(-691, 2730);
        push(
            "clausen-bernoulli",
            dup && gl && bern,
            "duplication, Gl_2(0), B_12".into(),
        );
    }
    // error-tracking soundness
    {
        let mut state: u64 = 0x243F6A8885A308D3;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let mut ok = true;
        for _ in 0..100 {
            let mut shadow =
                crate::exact::rat((next() % 200) as i64 - 100, (next() % 40 + 1) as i64);
            let mut val = Real::from_rational(&shadow, 128);
            for _ in 0..6 {
                let q = crate::exact::rat((next() % 200) as i64 - 100, (next() % 40 + 1) as i64);
                let r = Real::from_rational(&q, 128);
                match next() % 3 {
                    0 => {
                        shadow += &q;
                        val = val.add(&r);
                    }
                    1 => {
                        shadow -= &q;
                        val = val.sub(&r);
                    }
                    _ => {
                        shadow *= &q;
                        val = val.mul(&r);
                    }
                }
            }
            ok &= val.contains_rational(&shadow);
        }
        push(
            "error-tracking",
            ok,
            "100 random expression DAGs, exact shadow containment".into(),
        );
    }

    let all = results.iter().all(|r| r.pass);
    if json {
        print_json(&SelftestDoc {
            command: "selftest",
            version: VERSION,
            results,
            pass: all,
        });
    } else {
        for r in &results {
            println!(
                "{} {:<20} {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.check,
                r.detail
            );
        }
        println!(
            "{}",
            if all {
                "selftest: PASS"
            } else {
                "selftest: FAIL"
            }
        );
    }
    if all {
        EXIT_OK
    } else {
        EXIT_VERIFY_FAIL
    }
}
