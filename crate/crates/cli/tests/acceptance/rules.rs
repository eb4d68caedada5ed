//! Equations checked on surface syntax: both sides are elaborated in the
//! same scope and their normal forms compared as strings.

use super::{Audit, Outcome, Ws};

const PRELUDE: &str = "
dim j l
var f1 : (x : S1) -> Path S1 x base
var f2 : Path S1 base base -> S1
var f3 : S1 -> Path S1 base base
var p1 : (x : S1) * Path S1 x base
var p2 : Path S1 base base * S1
var p3 : S1 * Path S1 base base
var q : Path S1 base base
var g : S1 -> S1
var h : Path (S1 -> S1) (\\y -> base) (\\y -> y)
var e : Path (S1 -> S1) g g
var c : Path (S1 * S1) (base , loop j) (base , loop j)
";

/// One instance of an equation at a type.
struct Case {
    ty: String,
    lhs: String,
    rhs: String,
}

type Line = fn(&str) -> String;
type Fam = fn(&str, &str) -> String;

fn pi_coe(a: Line, b: Fam, r: &str, s: &str, f: &str) -> Case {
    Case {
        ty: format!("(x : {}) -> {}", a(s), b(s, "x")),
        lhs: format!("coe (i. (x : {}) -> {}) {r} {s} {f}", a("i"), b("i", "x")),
        rhs: format!(
            "\\a -> coe (i. {}) {r} {s} ({f} (coe (m. {}) {s} {r} a))",
            b("i", &format!("(coe (m. {}) {s} i a)", a("m"))),
            a("m")
        ),
    }
}

fn sigma_coe(a: Line, b: Fam, r: &str, s: &str, p: &str) -> Case {
    Case {
        ty: format!("(x : {}) * {}", a(s), b(s, "x")),
        lhs: format!("coe (i. (x : {}) * {}) {r} {s} {p}", a("i"), b("i", "x")),
        rhs: format!(
            "(coe (i. {}) {r} {s} ({p} .1) , coe (i. {}) {r} {s} ({p} .2))",
            a("i"),
            b("i", &format!("(coe (m. {}) {r} i ({p} .1))", a("m")))
        ),
    }
}

fn path_coe(a: Fam, a0: Line, a1: Line, r: &str, s: &str, p: &str) -> Case {
    let co = |from: &str, t: &str| format!("coe (m. {}) {from} {s} {t}", a("m", "k"));
    Case {
        ty: format!("Path (k. {}) ({}) ({})", a(s, "k"), a0(s), a1(s)),
        lhs: format!(
            "coe (i. Path (k. {}) ({}) ({})) {r} {s} {p}",
            a("i", "k"),
            a0("i"),
            a1("i")
        ),
        rhs: format!(
            "<k> hcom {r} {s} [k = 0 \\/ k = 1] ({}) (i. [i = {r} -> {} | k = 0 -> {} | k = 1 -> {}])",
            a(s, "k"),
            co("i", &format!("({p} @ k)")),
            co("i", &format!("({})", a0("i"))),
            co("i", &format!("({})", a1("i"))),
        ),
    }
}

struct HCom<'a> {
    r: &'a str,
    s: &'a str,
    phi: &'a str,
    cap: &'a str,
    tube: Line,
}

impl HCom<'_> {
    fn system(&self, i: &str, wrap: impl Fn(&str) -> String) -> String {
        format!(
            "[{i} = {} -> {} | {} -> {}]",
            self.r,
            wrap(self.cap),
            self.phi,
            wrap(&(self.tube)(i))
        )
    }
}

fn path_hcom(a: &str, a0: &str, a1: &str, h: HCom) -> Case {
    let HCom { r, s, phi, .. } = h;
    Case {
        ty: format!("Path (k. {a}) ({a0}) ({a1})"),
        lhs: format!(
            "hcom {r} {s} [{phi}] (Path (k. {a}) ({a0}) ({a1})) (i. {})",
            h.system("i", |t| t.to_string())
        ),
        rhs: format!(
            "<k> hcom {r} {s} [{phi} \\/ k = 0 \\/ k = 1] ({a}) (i. [i = {r} -> ({}) @ k | {phi} -> ({}) @ k | k = 0 -> {a0} | k = 1 -> {a1}])",
            h.cap,
            (h.tube)("i")
        ),
    }
}

fn sigma_hcom(a: &str, b: Line, h: HCom) -> Case {
    let HCom { r, s, phi, .. } = h;
    let sigma = format!("(x : {a}) * {}", b("x"));
    let fst = |m: &str| {
        format!(
            "(hcom {r} {m} [{phi}] ({a}) (n. {}))",
            h.system("n", |t| format!("({t} : {sigma}) .1"))
        )
    };
    let snd = h.system("i", |t| {
        format!("coe (m. {}) i {s} (({t} : {sigma}) .2)", b(&fst("m")))
    });
    Case {
        ty: format!("(x : {a}) * {}", b("x")),
        lhs: format!(
            "hcom {r} {s} [{phi}] ((x : {a}) * {}) (i. {})",
            b("x"),
            h.system("i", |t| t.to_string())
        ),
        rhs: format!(
            "({} , hcom {r} {s} [{phi}] ({}) (i. {snd}))",
            fst(s),
            b(&fst(s))
        ),
    }
}

fn ind_cases(motive: Line, b: &str, l: Line) -> [Case; 2] {
    let ind = |scrut: &str| {
        format!(
            "ind-S1 (x. {}) ({b}) (i. {}) ({scrut})",
            motive("x"),
            l("i")
        )
    };
    [
        Case {
            ty: motive("base"),
            lhs: ind("base"),
            rhs: b.to_string(),
        },
        Case {
            ty: motive("(loop j)"),
            lhs: ind("loop j"),
            rhs: l("j"),
        },
    ]
}

fn glue_beta(phi: &str, a: &str, partial: &str, total: &str) -> Case {
    Case {
        ty: a.to_string(),
        lhs: format!(
            "unglue ((glue [{phi} -> {partial}] ({total})) : Glue [{phi} -> ({a} , id-equiv ({a}))] ({a}))"
        ),
        rhs: total.to_string(),
    }
}

fn glue_top(phi: &str, a: &str, partial: &str) -> Case {
    Case {
        ty: format!("Glue [{phi} -> ({a} , id-equiv ({a}))] ({a})"),
        lhs: format!("glue [{phi} -> {partial}] ({partial})"),
        rhs: partial.to_string(),
    }
}

fn glue_line(i: &str) -> String {
    format!("Glue [{i} = 0 -> (S1 , id-equiv S1)] S1")
}

fn rules() -> Vec<(&'static str, Vec<Case>)> {
    let [ind_base_1, ind_loop_1] = ind_cases(|_| "S1".into(), "base", |i| format!("loop {i}"));
    let [ind_base_2, ind_loop_2] = ind_cases(
        |x| format!("Path S1 {x} {x}"),
        "<k> base",
        |i| format!("<k> loop {i}"),
    );
    let [ind_base_3, ind_loop_3] = ind_cases(
        |_| "S1 -> S1".into(),
        "\\y -> base",
        |i| format!("\\y -> loop {i}"),
    );
    vec![
        (
            "coe at Π",
            vec![
                pi_coe(
                    |_| "S1".into(),
                    |i, x| format!("Path S1 {x} (loop {i})"),
                    "0",
                    "1",
                    "f1",
                ),
                pi_coe(
                    |i| format!("Path S1 (loop {i}) base"),
                    |_, _| "S1".into(),
                    "1",
                    "0",
                    "f2",
                ),
                pi_coe(
                    glue_line,
                    |i, _| format!("Path S1 (loop {i}) (loop {i})"),
                    "0",
                    "j",
                    "f3",
                ),
            ],
        ),
        (
            "coe at Σ",
            vec![
                sigma_coe(
                    |_| "S1".into(),
                    |i, x| format!("Path S1 {x} (loop {i})"),
                    "0",
                    "1",
                    "p1",
                ),
                sigma_coe(
                    |i| format!("Path S1 (loop {i}) base"),
                    |_, _| "S1".into(),
                    "1",
                    "j",
                    "p2",
                ),
                sigma_coe(
                    glue_line,
                    |i, _| format!("Path S1 (loop {i}) (loop {i})"),
                    "0",
                    "j",
                    "p3",
                ),
            ],
        ),
        (
            "coe at path types",
            vec![
                path_coe(
                    |_, _| "S1".into(),
                    |i| format!("loop {i}"),
                    |_| "base".into(),
                    "0",
                    "1",
                    "q",
                ),
                path_coe(
                    |i, _| glue_line(i),
                    |i| format!("glue [{i} = 0 -> base] base"),
                    |i| format!("glue [{i} = 0 -> base] base"),
                    "0",
                    "j",
                    "q",
                ),
                path_coe(
                    |_, _| "S1 -> S1".into(),
                    |i| format!("\\y -> loop {i}"),
                    |_| "\\y -> y".into(),
                    "0",
                    "j",
                    "h",
                ),
            ],
        ),
        (
            "hcom at Σ",
            vec![
                sigma_hcom(
                    "S1",
                    |_| "S1".into(),
                    HCom {
                        r: "0",
                        s: "1",
                        phi: "j = 0",
                        cap: "(base , loop j)",
                        tube: |i| format!("(loop {i} , base)"),
                    },
                ),
                sigma_hcom(
                    "S1 -> S1",
                    |_| "S1".into(),
                    HCom {
                        r: "1",
                        s: "0",
                        phi: "j = 1 \\/ l = 0",
                        cap: "(g , base)",
                        tube: |i| format!("(g , loop {i})"),
                    },
                ),
                sigma_hcom(
                    "S1",
                    |x| format!("Path S1 {x} {x}"),
                    HCom {
                        r: "0",
                        s: "1",
                        phi: "j = 0",
                        cap: "(loop j , <k> loop j)",
                        tube: |_| "(base , <k> base)".into(),
                    },
                ),
            ],
        ),
        (
            "hcom at path types",
            vec![
                path_hcom(
                    "S1",
                    "base",
                    "base",
                    HCom {
                        r: "0",
                        s: "1",
                        phi: "j = 0",
                        cap: "q",
                        tube: |_| "q".into(),
                    },
                ),
                path_hcom(
                    "S1 -> S1",
                    "g",
                    "g",
                    HCom {
                        r: "1",
                        s: "j",
                        phi: "j = 1 \\/ l = 0",
                        cap: "e",
                        tube: |_| "e".into(),
                    },
                ),
                path_hcom(
                    "S1 * S1",
                    "(base , loop j)",
                    "(base , loop j)",
                    HCom {
                        r: "0",
                        s: "1",
                        phi: "j = 0 \\/ j = 1",
                        cap: "c",
                        tube: |_| "c".into(),
                    },
                ),
            ],
        ),
        (
            "circle induction at base",
            vec![ind_base_1, ind_base_2, ind_base_3],
        ),
        (
            "circle induction at loop",
            vec![ind_loop_1, ind_loop_2, ind_loop_3],
        ),
        (
            "unglue of glue",
            vec![
                glue_beta("j = 0", "S1", "base", "loop j"),
                glue_beta("j = 0 \\/ l = 1", "S1 -> S1", "g", "g"),
                glue_beta("j = l", "S1 * S1", "(loop j , base)", "(loop l , base)"),
            ],
        ),
        (
            "glue under a true cofibration",
            vec![
                glue_top("0 = 0", "S1", "loop j"),
                glue_top("j = j", "S1 -> S1", "g"),
                glue_top("j = 0 \\/ 1 = 1", "S1 * S1", "(base , loop l)"),
            ],
        ),
    ]
}

/// Glue types under a true cofibration, each with the type it must equal.
const GLUE_TOP_TYPES: [(&str, &str); 3] = [
    ("Glue [0 = 0 -> (S1 , id-equiv S1)] S1", "S1"),
    ("Glue [j = j -> (S1 -> S1 , id-equiv (S1 -> S1))] (S1 -> S1)", "S1 -> S1"),
    (
        "Glue [j = 0 \\/ 1 = 1 -> (Path S1 (loop j) base , id-equiv (Path S1 (loop j) base))] (Path S1 (loop j) base)",
        "Path S1 (loop j) base",
    ),
];

pub fn computation(audit: &mut Audit) -> Outcome {
    let ws = Ws::new(PRELUDE)?;
    let mut total = 0;
    for (name, cases) in rules() {
        for (k, case) in cases.iter().enumerate() {
            let lhs = ws.nf_at(&case.lhs, &case.ty, audit)?;
            let rhs = ws.nf_at(&case.rhs, &case.ty, audit)?;
            if lhs != rhs {
                return Err(format!(
                    "{name} #{k}: {}\n  gives {lhs}\n  but {}\n  gives {rhs}",
                    case.lhs, case.rhs
                ));
            }
            total += 1;
        }
    }
    for (glued, plain) in GLUE_TOP_TYPES {
        let a = ws.ty_nf(glued, audit)?;
        let b = ws.ty_nf(plain, audit)?;
        if a != b {
            return Err(format!("{glued} gives {a} but {plain} gives {b}"));
        }
        total += 1;
    }
    Ok(format!("{total} instances of 10 rules"))
}

pub fn endpoints(audit: &mut Audit) -> Outcome {
    let ws = Ws::new(
        "var x : Path ((y : S1) -> S1) (\\y -> y) (\\y -> y)\n\
         dim i\n\
         var p : Path S1 base (loop 1)\n\
         var u : Glue [i = 0 -> (S1 , id-equiv S1)] S1",
    )?;
    let base = ws.nf_at("base", "S1", audit)?;
    let mut checks = vec![
        (
            "x @ 0 base".to_string(),
            ws.nf_at("x @ 0 base", "S1", audit)?,
            base.clone(),
        ),
        (
            "x @ 1 base".into(),
            ws.nf_at("x @ 1 base", "S1", audit)?,
            base.clone(),
        ),
        (
            "loop 0".into(),
            ws.nf_at("loop 0", "S1", audit)?,
            base.clone(),
        ),
        (
            "loop 1".into(),
            ws.nf_at("loop 1", "S1", audit)?,
            base.clone(),
        ),
    ];
    // Away from the boundary the same terms stay stuck.
    for (t, ty) in [
        ("p @ i", "S1"),
        (
            "glue [i = 0 -> base] (loop i)",
            "Glue [i = 0 -> (S1 , id-equiv S1)] S1",
        ),
    ] {
        let nf = ws.nf_at(t, ty, audit)?;
        if nf == base {
            return Err(format!("{t} reduced to base without its cofibration"));
        }
    }
    let at0 = Ws::new(
        "dim i\n\
         var p : Path S1 base (loop 1)\n\
         var u : Glue [i = 0 -> (S1 , id-equiv S1)] S1\n\
         var v : S1\n\
         assume i = 0",
    )?;
    checks.push((
        "p @ i under i = 0".into(),
        at0.nf_at("p @ i", "S1", audit)?,
        base.clone(),
    ));
    checks.push((
        "glue [i = 0 -> base] (loop i) under i = 0".into(),
        at0.nf_at(
            "(glue [i = 0 -> base] (loop i) : Glue [i = 0 -> (S1 , id-equiv S1)] S1)",
            "S1",
            audit,
        )?,
        base.clone(),
    ));
    checks.push((
        "glue [i = 0 -> v] v under i = 0".into(),
        at0.nf_at(
            "(glue [i = 0 -> v] v : Glue [i = 0 -> (S1 , id-equiv S1)] S1)",
            "S1",
            audit,
        )?,
        at0.nf_at("v", "S1", audit)?,
    ));
    checks.push((
        "unglue u under i = 0".into(),
        at0.nf_at("unglue u", "S1", audit)?,
        at0.nf_at("u", "S1", audit)?,
    ));
    for (what, got, want) in &checks {
        if got != want {
            return Err(format!("{what} gives {got}, expected {want}"));
        }
    }
    Ok(format!("{} rewrites", checks.len()))
}

pub fn eta(audit: &mut Audit) -> Outcome {
    let cases = [
        ("S1 -> S1", "\\x -> f x"),
        ("(x : S1) -> Path S1 x x", "\\x -> f x"),
        ("(S1 -> S1) -> S1 * S1", "\\x -> f x"),
        ("Path S1 base base", "<i> f @ i"),
        ("Path (S1 -> S1) (\\y -> y) (\\y -> y)", "<i> f @ i"),
        ("Path (S1 * S1) (base , base) (base , base)", "<i> f @ i"),
        ("S1 * S1", "(f .1 , f .2)"),
        ("(x : S1) * Path S1 x base", "(f .1 , f .2)"),
        ("(S1 -> S1) * S1", "(f .1 , f .2)"),
    ];
    for (ty, expanded) in cases {
        let ws = Ws::new(&format!("var f : {ty}"))?;
        let a = ws.nf_at("f", ty, audit)?;
        let b = ws.nf_at(expanded, ty, audit)?;
        if a != b {
            return Err(format!("at {ty}: f gives {a} but {expanded} gives {b}"));
        }
    }
    Ok(format!("{} types", cases.len()))
}
