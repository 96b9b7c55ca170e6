//! Acceptance gate: one PASS/FAIL line per criterion, non-zero exit if any fail.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use carries_core::carries::{transition_matrix, transition_matrix_absolute, transition_matrix_bruteforce};
use carries_core::eulerian::{
    array_recurrence_check, eulerian_number, expected_row_sums, row_sums, symmetry_check,
    triangle_recurrence, v_closed,
};
use carries_core::exactmath::parse_rational;
use carries_core::simulate::{run_chain, SimConfig};
use carries_core::spectral::{commutes, deflate_char_poly, eigen_matrix, verify_diagonalization};
use carries_core::uniformsum::{eulerian_interval_prob, interval_prob, interval_probs, IntervalQuery};
use carries_core::{BaseSign, ChainSpec, DigitSet, ExactMatrix, NumerationSystem, Rational};
use common::{carries, golden_path, GOLDEN, USAGE_ERRORS};
use serde_json::{json, Value};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Duration, fn() -> Outcome);

fn q(s: &str) -> Rational {
    parse_rational(s).unwrap()
}

fn qs(xs: &[&str]) -> Vec<Rational> {
    xs.iter().map(|s| q(s)).collect()
}

fn spec(b: i64, d: i64, n: usize, sign: BaseSign) -> ChainSpec {
    ChainSpec::new(NumerationSystem::new(b, d, sign).unwrap(), n).unwrap()
}

fn pos(b: i64, d: i64, n: usize) -> ChainSpec {
    spec(b, d, n, BaseSign::Positive)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn grid(b_max: i64, n_max: usize) -> Vec<ChainSpec> {
    let mut out = Vec::new();
    for b in 2..=b_max {
        for d in -(b - 1)..=0 {
            for sign in [BaseSign::Positive, BaseSign::Negative] {
                for n in 1..=n_max {
                    out.push(spec(b, d, n, sign));
                }
            }
        }
    }
    out
}

const P_GRID: [&str; 5] = ["1", "2", "3", "5/3", "7/4"];

fn triangles() -> Outcome {
    let printed: [(&str, [&[&str]; 5]); 4] = [
        ("1", [&["1"], &["1", "0"], &["1", "1", "0"], &["1", "4", "1", "0"], &["1", "11", "11", "1", "0"]]),
        ("2", [&["1"], &["1", "1"], &["1", "6", "1"], &["1", "23", "23", "1"], &["1", "76", "230", "76", "1"]]),
        ("3", [&["1"], &["1", "2"], &["1", "13", "4"], &["1", "60", "93", "8"], &["1", "251", "1131", "545", "16"]]),
        (
            "5/3",
            [
                &["1"],
                &["1", "2/3"],
                &["1", "37/9", "4/9"],
                &["1", "404/27", "311/27", "8/27"],
                &["1", "3691/81", "8891/81", "2321/81", "16/81"],
            ],
        ),
    ];
    for (p, rows) in printed {
        let p = q(p);
        let tri = triangle_recurrence(4, &p);
        for (n, row) in rows.iter().enumerate() {
            let want = qs(row);
            ensure(tri.rows[n] == want, || format!("p={p} row {n}: {:?}", tri.rows[n]))?;
            let closed: Vec<Rational> = (0..=n as i64).map(|k| eulerian_number(n, &p, k)).collect();
            ensure(closed == want, || format!("p={p} row {n} closed form: {closed:?}"))?;
        }
    }
    Ok("20 rows exact".into())
}

struct PrintedTable {
    b: i64,
    n: usize,
    p: &'static str,
    prefactor_power: u32,
    p_rows: &'static [&'static [i64]],
    v_rows: &'static [&'static [&'static str]],
}

const TABLES: [PrintedTable; 6] = [
    PrintedTable {
        b: 3,
        n: 2,
        p: "2",
        prefactor_power: 2,
        p_rows: &[&[3, 6, 0], &[1, 7, 1], &[0, 6, 3]],
        v_rows: &[&["1", "6", "1"], &["1", "0", "-1"], &["1", "-2", "1"]],
    },
    PrintedTable {
        b: 5,
        n: 3,
        p: "2",
        prefactor_power: 3,
        p_rows: &[&[10, 80, 35, 0], &[4, 68, 52, 1], &[1, 52, 68, 4], &[0, 35, 80, 10]],
        v_rows: &[
            &["1", "23", "23", "1"],
            &["1", "5", "-5", "-1"],
            &["1", "-1", "-1", "1"],
            &["1", "-3", "3", "-1"],
        ],
    },
    PrintedTable {
        b: 7,
        n: 4,
        p: "2",
        prefactor_power: 4,
        p_rows: &[
            &[35, 826, 1330, 210, 0],
            &[15, 640, 1420, 325, 1],
            &[5, 470, 1451, 470, 5],
            &[1, 325, 1420, 640, 15],
            &[0, 210, 1330, 826, 35],
        ],
        v_rows: &[
            &["1", "76", "230", "76", "1"],
            &["1", "22", "0", "-22", "-1"],
            &["1", "4", "-10", "4", "1"],
            &["1", "-2", "0", "2", "-1"],
            &["1", "-4", "6", "-4", "1"],
        ],
    },
    PrintedTable {
        b: 6,
        n: 2,
        p: "5/3",
        prefactor_power: 2,
        p_rows: &[&[10, 25, 1], &[6, 27, 3], &[3, 27, 6]],
        v_rows: &[&["1", "37/9", "4/9"], &["1", "-1/3", "-2/3"], &["1", "-2", "1"]],
    },
    PrintedTable {
        b: 11,
        n: 3,
        p: "5/3",
        prefactor_power: 4,
        p_rows: &[&[84, 804, 439, 4], &[56, 745, 520, 10], &[35, 676, 600, 20], &[20, 600, 676, 35]],
        v_rows: &[
            &["1", "404/27", "311/27", "8/27"],
            &["1", "28/9", "-11/3", "-4/9"],
            &["1", "-4/3", "-1/3", "2/3"],
            &["1", "-3", "3", "-1"],
        ],
    },
    PrintedTable {
        b: 16,
        n: 4,
        p: "5/3",
        prefactor_power: 4,
        p_rows: &[
            &[715, 20176, 37390, 7240, 15],
            &[495, 18000, 38326, 8680, 35],
            &[330, 15900, 38960, 10276, 70],
            &[210, 13900, 39280, 12020, 126],
            &[126, 12020, 39280, 13900, 210],
        ],
        v_rows: &[
            &["1", "3691/81", "8891/81", "2321/81", "16/81"],
            &["1", "377/27", "-31/9", "-101/9", "-8/27"],
            &["1", "19/9", "-61/9", "29/9", "4/9"],
            &["1", "-7/3", "1", "1", "-2/3"],
            &["1", "-4", "6", "-4", "1"],
        ],
    },
];

fn printed_tables() -> Outcome {
    let mut notes = Vec::new();
    for t in &TABLES {
        let chain = if t.p == "2" { pos(t.b, -1, t.n) } else { pos(t.b, -3, t.n) };
        ensure(chain.p() == q(t.p), || format!("({}, n={}) has p={}", t.b, t.n, chain.p()))?;
        let m = t.p_rows.len();
        // the prefactor is fixed by requiring every row of the printed numerators to sum to it
        let row_total: i64 = t.p_rows[0].iter().sum();
        for row in t.p_rows {
            ensure(row.iter().sum::<i64>() == row_total, || format!("b={} rows have unequal sums", t.b))?;
        }
        ensure(row_total == t.b.pow(t.n as u32), || {
            format!("b={} n={}: rows sum to {row_total}, not b^n", t.b, t.n)
        })?;
        if t.b.pow(t.prefactor_power) != row_total {
            notes.push(format!("b={} printed 1/{}^{} read as 1/{}^{}", t.b, t.b, t.prefactor_power, t.b, t.n));
        }
        let printed = ExactMatrix::from_fn(m, m, |i, j| Rational::new(t.p_rows[i][j].into(), row_total.into()));
        let computed = transition_matrix(&chain).matrix;
        ensure(computed == printed, || format!("P for b={} n={} differs at {:?}", t.b, t.n, computed.first_difference(&printed)))?;
        let v = ExactMatrix::from_fn(m, m, |i, j| q(t.v_rows[i][j]));
        let vc = eigen_matrix(t.n, &chain.p(), m).map_err(|e| e.to_string())?;
        ensure(vc == v, || format!("V for b={} n={} differs at {:?}", t.b, t.n, vc.first_difference(&v)))?;
    }
    Ok(format!("6 P and 6 V tables exact; {}", notes.join("; ")))
}

fn diagonalization() -> Outcome {
    let specs = grid(11, 5);
    for s in &specs {
        let r = verify_diagonalization(s).map_err(|e| format!("{s:?}: {e}"))?;
        ensure(r.verified(), || format!("{s:?}: {:?}", r.failures().collect::<Vec<_>>()))?;
    }
    Ok(format!("{} systems", specs.len()))
}

fn oracle_equivalence() -> Outcome {
    let specs = grid(8, 4);
    for s in &specs {
        let f = transition_matrix(s);
        let brute = transition_matrix_bruteforce(&s.digit_set(), s.n()).map_err(|e| format!("{s:?}: {e}"))?;
        ensure(f == brute, || format!("{s:?}: closed form and brute force differ"))?;
        ensure(transition_matrix_absolute(s) == f, || format!("{s:?}: absolute form differs"))?;
    }
    Ok(format!("{} systems, three routes equal", specs.len()))
}

const SECTION_FOUR: [[i64; 10]; 10] = [
    [1, 2, 0, 3, 0, 2, 1, 0, 0, 0],
    [2, 0, 0, 2, 1, 4, 0, 0, 0, 0],
    [1, 0, 2, 0, 3, 2, 0, 1, 0, 0],
    [0, 1, 2, 0, 3, 0, 2, 1, 0, 0],
    [0, 2, 0, 0, 2, 1, 4, 0, 0, 0],
    [0, 1, 0, 2, 0, 3, 2, 0, 1, 0],
    [0, 0, 1, 2, 0, 3, 0, 2, 1, 0],
    [0, 0, 2, 0, 0, 2, 1, 4, 0, 0],
    [0, 0, 1, 0, 2, 0, 3, 2, 0, 1],
    [0, 0, 0, 1, 2, 0, 3, 0, 2, 1],
];

const SEPTIC: &str = "531441x^7 - 19683x^5 + 5103x^4 - 1944x^3 - 297x^2 + 24x + 2";

fn arbitrary_digit_example() -> Outcome {
    let digits = DigitSet::new(vec![-1, 0, 4], 3).map_err(|e| e.to_string())?;
    let tm = transition_matrix_bruteforce(&digits, 2).map_err(|e| e.to_string())?;
    let printed = ExactMatrix::from_fn(10, 10, |i, j| Rational::new(SECTION_FOUR[i][j].into(), 9.into()));
    let mut problems = Vec::new();
    let want_states: Vec<i64> = (-5..=4).collect();
    if tm.states != want_states {
        problems.push(format!("state space {:?}, expected -5..=4", tm.states));
    }
    if tm.matrix != printed {
        problems.push(format!("{}x{} matrix differs from the printed 10x10", tm.m(), tm.m()));
    }
    let roots = qs(&["1", "1/3", "1/9"]);
    match deflate_char_poly(&tm.matrix, &roots) {
        Ok(cofactor) => {
            let (ints, _) = cofactor.clear_denominators();
            let text = ints.to_string();
            if text != SEPTIC {
                problems.push(format!("cofactor after (x-1)(3x-1)(9x-1) is {text}"));
            }
        }
        Err(e) => problems.push(format!("char poly not divisible: {e}")),
    }
    if problems.is_empty() {
        Ok("10 states, printed matrix, septic cofactor".into())
    } else {
        Err(problems.join("; "))
    }
}

fn eulerian_identities() -> Outcome {
    let mut checked = 0;
    for p in P_GRID {
        let p = q(p);
        let tri = triangle_recurrence(8, &p);
        for n in 1..=8 {
            let rec = array_recurrence_check(n, &p).map_err(|e| e.to_string())?;
            ensure(rec.passed(), || format!("p={p} n={n}: {:?}", rec.violations.first()))?;
            for k in 0..=n as i64 {
                let closed = v_closed(n, &p, 0, k).map_err(|e| e.to_string())?;
                ensure(tri.rows[n][k as usize] == closed, || format!("p={p} E({n},{k})"))?;
            }
            ensure(row_sums(n, &p) == expected_row_sums(n, &p), || format!("p={p} n={n} row sums"))?;
            let sym = symmetry_check(n, &p).map_err(|e| e.to_string())?;
            ensure(sym.passed(), || format!("p={p} n={n}: {:?}", sym.violations.first()))?;
            checked += rec.checked + sym.checked;
        }
    }
    Ok(format!("{checked} identities exact"))
}

fn interval_identity() -> Outcome {
    let table = [
        ("1", vec!["1/6", "4/6", "1/6", "0"]),
        ("2", vec!["1/48", "23/48", "23/48", "1/48"]),
        ("3", vec!["1/162", "60/162", "93/162", "8/162"]),
        ("5/3", vec!["27/750", "404/750", "311/750", "8/750"]),
    ];
    for (p, row) in &table {
        let p = q(p);
        for (k, want) in row.iter().enumerate() {
            let got = interval_prob(&IntervalQuery::new(3, p.clone(), k as i64).map_err(|e| e.to_string())?);
            ensure(got == q(want), || format!("p={p} k={k}: {got}"))?;
            ensure(got == eulerian_interval_prob(3, &p, k as i64), || format!("p={p} k={k} vs Eulerian"))?;
        }
    }
    let mut count = 0;
    for p in P_GRID {
        let p = q(p);
        for n in 1..=8 {
            for (k, x) in interval_probs(n, &p).map_err(|e| e.to_string())?.iter().enumerate() {
                ensure(*x == eulerian_interval_prob(n, &p, k as i64), || format!("p={p} n={n} k={k}"))?;
                count += 1;
            }
        }
    }
    Ok(format!("example table and {count} grid values exact"))
}

fn commutativity() -> Outcome {
    let pairs = [
        (pos(3, -1, 2), pos(9, -4, 2)),
        (pos(11, -3, 3), pos(21, -6, 3)),
        (pos(7, -1, 4), pos(13, -2, 4)),
    ];
    for (a, b) in &pairs {
        let ok = commutes(a, b).map_err(|e| e.to_string())?;
        ensure(ok, || format!("{a:?} and {b:?} do not commute"))?;
    }
    Ok("3 pairs".into())
}

fn simulation() -> Outcome {
    let mut tvs = Vec::new();
    for (s, seed) in [(pos(3, -1, 2), 42u64), (pos(5, -1, 3), 7)] {
        let cfg = SimConfig::for_chain(&s, 1_000_000, seed).map_err(|e| e.to_string())?;
        let a = run_chain(&cfg).map_err(|e| e.to_string())?;
        let b = run_chain(&cfg).map_err(|e| e.to_string())?;
        let ja = serde_json::to_vec(&a).unwrap();
        ensure(ja == serde_json::to_vec(&b).unwrap(), || "repeat run differs".into())?;
        let tv = a.tv_distance.ok_or("no exact target")?;
        ensure(tv < 5e-3, || format!("{s:?}: tv {tv:e}"))?;
        tvs.push(format!("{tv:.2e}"));
    }
    Ok(format!("tv = {}", tvs.join(", ")))
}

fn cli_contract() -> Outcome {
    for (name, args) in GOLDEN {
        let out = carries(args);
        ensure(out.status.code() == Some(0), || format!("{name}: exit {:?}", out.status.code()))?;
        let golden = std::fs::read(golden_path(name)).map_err(|e| format!("{name}: {e}"))?;
        ensure(out.stdout == golden, || format!("{name}: output differs from golden"))?;
    }
    for args in USAGE_ERRORS {
        let out = carries(args);
        ensure(out.status.code() == Some(2), || format!("{args:?}: exit {:?}", out.status.code()))?;
    }
    let dir = std::env::temp_dir().join(format!("carries-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("corrupted.json");
    let out = carries(&["matrix", "--base", "3", "--d", "-1", "--n", "2"]);
    let mut doc: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    doc["payload"]["matrix"][0][0] = json!({"num": "2", "den": "9"});
    doc["payload"]["matrix"][0][1] = json!({"num": "7", "den": "9"});
    std::fs::write(&path, serde_json::to_vec(&doc).unwrap()).map_err(|e| e.to_string())?;
    let out = carries(&["verify", "--base", "3", "--d", "-1", "--n", "2", "--matrix", path.to_str().unwrap()]);
    let _ = std::fs::remove_dir_all(&dir);
    ensure(out.status.code() == Some(1), || format!("corrupted verify exit {:?}", out.status.code()))?;
    let ok = carries(&["verify", "--base", "5", "--d", "-1", "--n", "3"]);
    ensure(ok.status.code() == Some(0), || "verify of a true matrix failed".into())?;
    Ok(format!("{} goldens, {} usage errors, exit 1 on corrupted matrix", GOLDEN.len(), USAGE_ERRORS.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("triangle reproduction", Duration::from_secs(1), triangles),
        ("printed P and V tables", Duration::from_secs(1), printed_tables),
        ("diagonalization grid", Duration::from_secs(30), diagonalization),
        ("closed form vs brute force", Duration::from_secs(30), oracle_equivalence),
        ("arbitrary digit set example", Duration::from_secs(5), arbitrary_digit_example),
        ("Eulerian identities", Duration::from_secs(10), eulerian_identities),
        ("interval probabilities", Duration::from_secs(5), interval_identity),
        ("commuting matrices", Duration::from_secs(1), commutativity),
        ("simulation", Duration::from_secs(30), simulation),
        ("CLI contract", Duration::from_secs(5), cli_contract),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > *budget => Err(format!("over time budget; {detail}")),
            other => other,
        };
        let timing = format!("{:.2}s / {}s", elapsed.as_secs_f64(), budget.as_secs());
        match result {
            Ok(detail) => println!("PASS  {:>2}  {name} [{timing}] {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2}  {name} [{timing}] {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
