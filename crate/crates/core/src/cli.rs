//! The `fermat-syz` command line.
//!
//! Every command produces one record: the command name, the instance, a map
//! of results and a provenance label. With `--json` each record is printed as
//! a single JSON line, otherwise as an aligned two-column table. Rationals are
//! always strings `"num/den"` (or `"num"`), never decimals.
//!
//! Exit codes: 0 success, 2 validation error or bad flags, 3 value not
//! determined (including oracle budget overruns), 4 verify mismatch.

use std::io::Write;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::arith::{big_pow, is_prime};
use crate::classification::{
    classify, delta_at_instance, hk_number, hkf_detailed, Classification, HKNumber, Verdict,
};
use crate::error::Error;
use crate::geometry::{
    char0_hn_filtration, char0_is_semistable, hn_filtration, matrix_factorization_scalar,
    periodicity, resolution_twists, HNFiltrationData, Minimality, TwistedPeriodicity,
};
use crate::han_delta::{han_delta, DeltaResult, DeltaWitness, RationalTriple};
use crate::instance::FermatInstance;
use crate::oracle::{budget_from_env, hkf_oracle};
use crate::rational::{format_rational, parse_rational};
use crate::series::{series_mr, DEFAULT_TRUNCATION};

#[derive(Debug, Parser)]
#[command(name = "fermat-syz", version, about = "Syzygy bundles of (X^a,Y^a,Z^a) on Fermat curves")]
struct Cli {
    /// Print one JSON object per line instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Characteristic (0 for characteristic zero).
    #[arg(long)]
    p: u64,
    /// Degree of the Fermat curve.
    #[arg(long)]
    n: u64,
    /// Exponent of the ideal (X^a, Y^a, Z^a).
    #[arg(long)]
    a: u64,
}

impl InstanceArgs {
    fn instance(&self) -> Result<FermatInstance, Error> {
        FermatInstance::new(self.p, self.n, self.a)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full classification of an instance.
    Classify(InstanceArgs),
    /// δ(a/n, a/n, a/n), or δ of an explicit triple given with --t.
    Delta {
        #[arg(long)]
        p: u64,
        #[arg(long, requires = "a", conflicts_with = "t")]
        n: Option<u64>,
        #[arg(long, requires = "n", conflicts_with = "t")]
        a: Option<u64>,
        /// Comma-separated rationals, e.g. "1/7,1/7,1/7".
        #[arg(long, required_unless_present = "n")]
        t: Option<String>,
    },
    /// Hilbert-Kunz multiplicity.
    Hkm(InstanceArgs),
    /// Hilbert-Kunz function at level e.
    Hkf {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        e: u32,
        /// Compute by brute force over F_p instead of the closed form.
        #[arg(long)]
        oracle: bool,
    },
    /// Twisted Frobenius periodicity.
    Periodicity(InstanceArgs),
    /// Strong Harder-Narasimhan filtration.
    Hn(InstanceArgs),
    /// Hilbert series of Syz(X^r, Y^r, Z^r) on the degree-n Fermat ring.
    Series {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        trunc: usize,
    },
    /// Twists of the periodic resolution of R/(X^b, Y^b, Z^b).
    Resolution {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        b: u64,
    },
    /// Compare closed-form HKF values with the oracle on a grid.
    Verify {
        #[arg(long)]
        max_p: u64,
        #[arg(long)]
        max_n: u64,
        #[arg(long)]
        max_a: u64,
        #[arg(long)]
        max_e: u32,
        /// Bound on 3 a p^e for oracle runs (default from the environment, else 200).
        #[arg(long)]
        budget: Option<u64>,
    },
}

struct Record {
    command: &'static str,
    instance: Map<String, Value>,
    results: Map<String, Value>,
    provenance: String,
}

impl Record {
    fn new(command: &'static str, provenance: impl Into<String>) -> Self {
        Record { command, instance: Map::new(), results: Map::new(), provenance: provenance.into() }
    }

    fn with_instance(mut self, inst: &FermatInstance) -> Self {
        self.instance.insert("p".into(), json!(inst.p));
        self.instance.insert("n".into(), json!(inst.n));
        self.instance.insert("a".into(), json!(inst.a));
        self
    }

    fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.instance.insert(key.into(), v.into());
        self
    }

    fn set(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.into(), v.into());
    }

    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "instance": self.instance,
            "results": self.results,
            "provenance": self.provenance,
        })
    }

    fn render(&self, json_mode: bool) -> String {
        if json_mode {
            return self.to_json().to_string();
        }
        let inst = self
            .instance
            .iter()
            .map(|(k, v)| format!("{k}={}", plain(v)))
            .collect::<Vec<_>>()
            .join(" ");
        let mut rows = vec![("command".to_string(), self.command.to_string()), ("instance".into(), inst)];
        rows.extend(self.results.iter().map(|(k, v)| (k.clone(), plain(v))));
        rows.push(("provenance".into(), self.provenance.clone()));
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn q(x: &num_rational::BigRational) -> Value {
    Value::String(format_rational(x))
}

/// Integers as JSON numbers when they fit in an `i64`, else as strings.
fn z(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), Value::from)
}

fn delta_json(d: &DeltaResult) -> Value {
    match &d.witness {
        DeltaWitness::NonTriangle { dominant } => json!({"kind": "non-triangle", "dominant": dominant}),
        DeltaWitness::Witness { s, u } => json!({"kind": "witness", "s": s, "u": u.0.iter().map(z).collect::<Vec<_>>()}),
        DeltaWitness::Zero => json!({"kind": "zero"}),
    }
}

fn hn_json(hn: &HNFiltrationData) -> (Value, Value) {
    let short = json!({"s": hn.s, "sub": z(&hn.sub_degree), "quot": z(&hn.quot_degree)});
    let detail = json!({
        "m": z(&hn.m),
        "ell": z(&hn.ell),
        "split_threshold": hn.split_threshold,
        "split_threshold_is_upper_bound": true,
        "minimal": match hn.minimal { Minimality::Minimal => "yes", Minimality::Unknown => "unknown" },
    });
    (short, detail)
}

fn periodicity_json(per: &TwistedPeriodicity) -> Value {
    json!({
        "s": per.s,
        "t": per.t,
        "twist_per_period": z(&per.twist_per_period),
        "targets": per.targets,
    })
}

fn hk_json(rec: &mut Record, hk: &HKNumber) {
    rec.set("hkm", q(&hk.value));
    if let Some(ell) = &hk.ell {
        rec.set("ell", z(ell));
        rec.set("ell_level", hk.level);
    }
}

fn classification_record(c: &Classification) -> Record {
    let label = match c.verdict {
        Verdict::StronglySemistablePeriodic { .. } => "strongly-semistable-periodic",
        Verdict::FinitePd { .. } => "finite-pd",
        Verdict::NotStronglySemistable { .. } => "not-strongly-semistable",
    };
    let mut rec = Record::new("classify", label).with_instance(&c.instance);
    rec.set("delta", q(&c.delta.value));
    rec.set("delta_witness", delta_json(&c.delta));
    hk_json(&mut rec, &c.hkm);
    rec.set("verdict", label);
    match &c.verdict {
        Verdict::StronglySemistablePeriodic { periodicity } => {
            rec.set("periodicity", periodicity_json(periodicity));
        }
        Verdict::FinitePd { e0, split_degrees } => {
            rec.set("e0", *e0);
            rec.set("split_degrees", json!([z(&split_degrees.0), z(&split_degrees.1)]));
        }
        Verdict::NotStronglySemistable { hn, level, destabilizing_degree, e0, split_degrees } => {
            if let Some(hn) = hn {
                let (short, detail) = hn_json(hn);
                rec.set("hn", short);
                rec.set("hn_detail", detail);
            }
            rec.set("destabilizing_level", *level);
            rec.set("destabilizing_degree", q(destabilizing_degree));
            rec.set("e0", *e0);
            rec.set("split_degrees", json!([z(&split_degrees.0), z(&split_degrees.1)]));
        }
    }
    rec
}

fn char0_record(inst: &FermatInstance) -> Result<Record, Error> {
    let semistable = char0_is_semistable(inst.n, inst.a);
    let mut rec = Record::new("classify", "char0-criterion").with_instance(inst);
    rec.set("semistable", semistable);
    if !semistable {
        let (sub, quot) = char0_hn_filtration(inst.n, inst.a)?;
        rec.set("hn", json!({"s": 0, "sub": z(&sub), "quot": z(&quot)}));
    }
    Ok(rec)
}

fn positive(inst: FermatInstance) -> Result<FermatInstance, Error> {
    inst.prime()?;
    Ok(inst)
}

#[derive(Debug)]
enum Failure {
    Error(Error),
    Mismatch,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn execute(cmd: &Command) -> Result<Vec<Record>, (Vec<Record>, Failure)> {
    let one = |r: Result<Record, Error>| r.map(|r| vec![r]).map_err(|e| (Vec::new(), Failure::Error(e)));
    match cmd {
        Command::Classify(args) => one((|| {
            let inst = args.instance()?;
            if inst.p == 0 {
                char0_record(&inst)
            } else {
                Ok(classification_record(&classify(&inst)?))
            }
        })()),
        Command::Delta { p, n, a, t } => one((|| {
            let (rec, d) = match (n, a, t) {
                (Some(n), Some(a), _) => {
                    let inst = positive(FermatInstance::new(*p, *n, *a)?)?;
                    (Record::new("delta", "").with_instance(&inst), delta_at_instance(&inst)?)
                }
                (_, _, Some(t)) => {
                    if *p == 0 {
                        return Err(Error::ZeroCharacteristic);
                    }
                    let parts = t.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
                    let entries: [_; 3] = parts.try_into().map_err(|_| {
                        Error::InvalidParameter("--t needs exactly three rationals".into())
                    })?;
                    let triple = RationalTriple::new(entries)?;
                    let rec = Record::new("delta", "").param("p", *p).param("t", triple.to_string());
                    (rec, han_delta(&triple, *p)?)
                }
                _ => return Err(Error::InvalidParameter("give --n and --a, or --t".into())),
            };
            let mut rec = rec;
            rec.provenance = match d.witness {
                DeltaWitness::NonTriangle { .. } => "non-triangle",
                DeltaWitness::Witness { .. } => "odd-lattice-witness",
                DeltaWitness::Zero => "no-witness",
            }
            .into();
            rec.set("delta", q(&d.value));
            rec.set("delta_witness", delta_json(&d));
            Ok(rec)
        })()),
        Command::Hkm(args) => one((|| {
            let inst = positive(args.instance()?)?;
            let mut rec = Record::new("hkm", "delta-formula").with_instance(&inst);
            hk_json(&mut rec, &hk_number(&inst)?);
            Ok(rec)
        })()),
        Command::Hkf { inst, e, oracle } => one((|| {
            let inst = positive(inst.instance()?)?;
            let (value, label) = if *oracle {
                (hkf_oracle(&inst, *e, budget_from_env())?.to_string(), "oracle")
            } else {
                let v = hkf_detailed(&inst, *e)?;
                (v.value.to_string(), v.branch.label())
            };
            let mut rec = Record::new("hkf", label).with_instance(&inst).param("e", *e);
            rec.set("hkf", value);
            Ok(rec)
        })()),
        Command::Periodicity(args) => one((|| {
            let inst = positive(args.instance()?)?;
            let mut rec = Record::new("periodicity", "frobenius-reduction").with_instance(&inst);
            match periodicity(&inst)? {
                Some(per) => rec.set("periodicity", periodicity_json(&per)),
                None => rec.set("periodicity", Value::Null),
            }
            Ok(rec)
        })()),
        Command::Hn(args) => one((|| {
            let inst = args.instance()?;
            if inst.p == 0 {
                let (sub, quot) = char0_hn_filtration(inst.n, inst.a)?;
                let mut rec = Record::new("hn", "char0-criterion").with_instance(&inst);
                rec.set("hn", json!({"s": 0, "sub": z(&sub), "quot": z(&quot)}));
                return Ok(rec);
            }
            let hn = hn_filtration(&inst)?;
            let (short, detail) = hn_json(&hn);
            let mut rec = Record::new("hn", "hn-filtration").with_instance(&inst);
            rec.set("hn", short);
            rec.set("hn_detail", detail);
            if let Some((a, b)) = hn.twists_at(hn.s + hn.split_threshold) {
                rec.set("split_level", hn.s + hn.split_threshold);
                rec.set("split_twists", json!([z(&a), z(&b)]));
            }
            Ok(rec)
        })()),
        Command::Series { n, r, trunc } => one((|| {
            let s = series_mr(*n, *r, *trunc)?;
            let mut rec = Record::new("series", "syzygy-series").param("n", *n).param("r", *r);
            rec.set("numerator", s.numerator.clone());
            rec.set("denominator", "(1-t)^3");
            rec.set("coefficients", s.coefficients.clone());
            Ok(rec)
        })()),
        Command::Resolution { n, b } => one((|| {
            let tw = resolution_twists(*n, &BigInt::from(*b))?;
            let r = (b % n) as u32;
            let c = matrix_factorization_scalar(*n as u32, r)?;
            let mut rec = Record::new("resolution", "periodic-resolution").param("n", *n).param("b", *b);
            rec.set("theta", b / n);
            rec.set("r", r);
            rec.set("f1", tw.f1.iter().map(z).collect::<Vec<_>>());
            rec.set("f2", tw.f2.iter().map(z).collect::<Vec<_>>());
            rec.set("phi_product_scalar", c.map_or(Value::Null, Value::from));
            Ok(rec)
        })()),
        Command::Verify { max_p, max_n, max_a, max_e, budget } => {
            verify(*max_p, *max_n, *max_a, *max_e, budget.unwrap_or_else(budget_from_env))
        }
    }
}

type Cell = (u64, u64, u64, u32);
type Outcome = (Cell, Result<(BigInt, u64), Error>);

fn verify(max_p: u64, max_n: u64, max_a: u64, max_e: u32, budget: u64) -> Result<Vec<Record>, (Vec<Record>, Failure)> {
    let mut cells: Vec<Cell> = Vec::new();
    let mut skipped = 0u64;
    for p in (2..=max_p).filter(|&p| is_prime(p)) {
        for n in (2..=max_n).filter(|n| n % p != 0) {
            for a in 1..=max_a {
                for e in 0..=max_e {
                    if big_pow(p, e) * a * 3 <= BigInt::from(budget) {
                        cells.push((p, n, a, e));
                    } else {
                        skipped += 1;
                    }
                }
            }
        }
    }
    let mut outcomes: Vec<Outcome> = cells
        .par_iter()
        .map(|&(p, n, a, e)| {
            let res = (|| {
                let inst = FermatInstance::new(p, n, a)?;
                Ok((hkf_detailed(&inst, e)?.value, hkf_oracle(&inst, e, budget)?))
            })();
            ((p, n, a, e), res)
        })
        .collect();
    outcomes.sort_by_key(|(cell, _)| *cell);
    let params = |rec: Record| {
        rec.param("max_p", max_p).param("max_n", max_n).param("max_a", max_a).param("max_e", max_e).param("budget", budget)
    };
    let mut matched = 0u64;
    for ((p, n, a, e), res) in outcomes {
        match res {
            Ok((closed, oracle)) if closed == BigInt::from(oracle) => matched += 1,
            Ok((closed, oracle)) => {
                let mut rec = params(Record::new("verify", "oracle"));
                rec.set("status", "mismatch");
                rec.set("first_mismatch", json!({"p": p, "n": n, "a": a, "e": e, "closed_form": closed.to_string(), "oracle": oracle.to_string()}));
                rec.set("matched_before", matched);
                return Err((vec![rec], Failure::Mismatch));
            }
            Err(err) => return Err((Vec::new(), Failure::Error(err))),
        }
    }
    let mut rec = params(Record::new("verify", "oracle"));
    rec.set("status", "ok");
    rec.set("matched", matched);
    rec.set("skipped_over_budget", skipped);
    Ok(vec![rec])
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NotDetermined(_) | Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

/// Runs the CLI on `args` (including the program name), writing records to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let (records, code) = match execute(&cli.command) {
        Ok(records) => (records, 0),
        Err((records, Failure::Mismatch)) => (records, 4),
        Err((records, Failure::Error(e))) => {
            let _ = writeln!(err, "error: {e}");
            (records, exit_code(&e))
        }
    };
    for rec in &records {
        let text = rec.render(cli.json);
        let _ = if cli.json { writeln!(out, "{text}") } else { write!(out, "{text}") };
    }
    code
}
