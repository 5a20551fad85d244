//! Seeded random Little programs for property tests.
//!
//! Programs are produced as text so that the parser sees every layout the
//! generator can think of: odd spacing, blank lines, comments in any gap,
//! number decorations, both quote styles, list tails and shadowing.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Definitions before `main`.
    pub max_defs: usize,
    pub max_depth: u32,
    /// Irregular whitespace and comments.
    pub messy_layout: bool,
    /// Chance that a variable reference is to an unbound name.
    pub free_var_rate: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_defs: 5,
            max_depth: 4,
            messy_layout: true,
            free_var_rate: 0.0,
        }
    }
}

const NAMES: &[&str] = &[
    "a", "b", "c", "x", "y", "w", "h", "n", "k", "left", "top", "width", "height", "fill", "shape", "startX", "endX",
    "r", "xs", "acc",
];

const BINOPS: &[&str] = &["+", "-", "*", "/", "<", "max", "min"];

const COLORS: &[&str] = &["red", "blue", "gray", "teal", "black"];

/// A random program: some definitions followed by `main`.
pub fn program(seed: u64, cfg: &GenConfig) -> String {
    Gen::new(seed, cfg.clone()).program()
}

/// Two expressions sharing structure except at random positions, for
/// exercising anti-unification. `diff_rate` is the chance that a node is
/// generated independently on both sides.
pub fn expression_pair(seed: u64, max_depth: u32, diff_rate: f64) -> (String, String) {
    let mut g = Gen::new(
        seed,
        GenConfig {
            messy_layout: false,
            max_depth,
            ..GenConfig::default()
        },
    );
    let scope: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
    g.pair(max_depth, &scope, diff_rate)
}

struct Gen {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

/// Names visible at a point, with the arity of those bound to lambdas.
#[derive(Clone, Default)]
struct Scope {
    vars: Vec<String>,
    funs: Vec<(String, usize)>,
}

impl Scope {
    fn bind(&mut self, name: &str) {
        self.funs.retain(|(f, _)| f != name);
        self.vars.push(name.to_string());
    }

    fn bind_fun(&mut self, name: &str, arity: usize) {
        self.vars.push(name.to_string());
        self.funs.retain(|(f, _)| f != name);
        self.funs.push((name.to_string(), arity));
    }
}

impl Gen {
    fn new(seed: u64, cfg: GenConfig) -> Self {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p.clamp(0.0, 1.0))
    }

    fn pick<'a>(&mut self, xs: &'a [&'a str]) -> &'a str {
        xs.choose(&mut self.rng).expect("nonempty")
    }

    /// Separator between two tokens.
    fn sep(&mut self) -> String {
        if !self.cfg.messy_layout {
            return " ".into();
        }
        match self.rng.random_range(0..20) {
            0 => "  ".into(),
            1 => format!("\n{}", " ".repeat(self.rng.random_range(0..6))),
            2 => format!(" ; {}\n  ", self.pick(NAMES)),
            3 => "\n\n  ".into(),
            _ => " ".into(),
        }
    }

    /// Optional trivia after an opening or before a closing delimiter.
    fn opt(&mut self) -> String {
        if !self.cfg.messy_layout {
            return String::new();
        }
        match self.rng.random_range(0..25) {
            0 => " ".into(),
            1 => "\n ".into(),
            2 => " ; end\n".into(),
            _ => String::new(),
        }
    }

    fn number(&mut self) -> String {
        let mut s = match self.rng.random_range(0..10) {
            0 => format!("{}.5", self.rng.random_range(0..50)),
            1 => format!("-{}", self.rng.random_range(1..20)),
            _ => self.rng.random_range(0..400).to_string(),
        };
        if self.chance(0.1) {
            s.push('!');
        }
        if self.chance(0.08) {
            s.push_str("{0-500}");
        }
        s
    }

    fn string(&mut self) -> String {
        let c = self.pick(COLORS);
        if self.chance(0.5) {
            format!("'{c}'")
        } else {
            format!("\"{c}\"")
        }
    }

    fn var(&mut self, scope: &Scope) -> String {
        if scope.vars.is_empty() || self.chance(self.cfg.free_var_rate) {
            return format!("free{}", self.rng.random_range(0..3));
        }
        scope.vars.choose(&mut self.rng).expect("nonempty").clone()
    }

    fn leaf(&mut self, scope: &Scope) -> String {
        match self.rng.random_range(0..10) {
            0..=3 => self.number(),
            4 => self.string(),
            5 => if self.chance(0.5) { "true" } else { "false" }.into(),
            _ if !scope.vars.is_empty() => self.var(scope),
            _ => self.number(),
        }
    }

    fn exp(&mut self, depth: u32, scope: &Scope) -> String {
        if depth == 0 || self.chance(0.25) {
            return self.leaf(scope);
        }
        let d = depth - 1;
        match self.rng.random_range(0..12) {
            0..=2 => {
                let op = self.pick(BINOPS);
                let (o, a, b, c) = (self.opt(), self.exp(d, scope), self.exp(d, scope), self.opt());
                let (s1, s2) = (self.sep(), self.sep());
                format!("({o}{op}{s1}{a}{s2}{b}{c})")
            }
            3 => {
                let mut s = format!("({}rect", self.opt());
                let fill = self.string();
                s.push_str(&self.sep());
                s.push_str(&fill);
                for _ in 0..4 {
                    let e = self.exp(d, scope);
                    s.push_str(&self.sep());
                    s.push_str(&e);
                }
                s.push_str(&self.opt());
                s.push(')');
                s
            }
            4 => {
                let n = self.rng.random_range(0..4);
                let mut s = format!("[{}", self.opt());
                for i in 0..n {
                    if i > 0 {
                        s.push_str(&self.sep());
                    }
                    s.push_str(&self.exp(d, scope));
                }
                if n > 0 && self.chance(0.2) {
                    let t = self.exp(d, scope);
                    s.push_str(&format!("{}|{}{}", self.sep(), self.sep(), t));
                }
                s.push_str(&self.opt());
                s.push(']');
                s
            }
            5 | 6 => self.let_exp(d, scope),
            7 => {
                let (params, inner) = self.params(scope);
                let body = self.exp(d, &inner);
                format!("(\\{params}{}{body})", self.sep())
            }
            8 if !scope.funs.is_empty() => {
                let (f, arity) = scope.funs.choose(&mut self.rng).expect("nonempty").clone();
                let mut s = format!("({f}");
                for _ in 0..arity {
                    let e = self.exp(d, scope);
                    s.push_str(&self.sep());
                    s.push_str(&e);
                }
                s.push(')');
                s
            }
            9 => self.case_exp(d, scope),
            _ => self.leaf(scope),
        }
    }

    fn params(&mut self, scope: &Scope) -> (String, Scope) {
        let n = self.rng.random_range(1..4);
        let mut inner = scope.clone();
        let mut names = Vec::new();
        for _ in 0..n {
            let x = self.pick(NAMES).to_string();
            inner.bind(&x);
            names.push(x);
        }
        let text = if n == 1 && self.chance(0.6) {
            names[0].clone()
        } else {
            format!("({})", names.join(" "))
        };
        (text, inner)
    }

    fn let_exp(&mut self, d: u32, scope: &Scope) -> String {
        let mut inner = scope.clone();
        let (kw, pat, bound) = match self.rng.random_range(0..5) {
            0 => {
                let (a, b) = (self.pick(NAMES), self.pick(NAMES));
                let (e1, e2) = (self.exp(d, scope), self.exp(d, scope));
                inner.bind(a);
                inner.bind(b);
                ("let", format!("[{a} {b}]"), format!("[{e1} {e2}]"))
            }
            1 => {
                let f = self.pick(NAMES);
                let x = self.pick(NAMES);
                let mut fs = scope.clone();
                fs.bind_fun(f, 1);
                let mut body_scope = fs.clone();
                body_scope.bind(x);
                let body = self.exp(d, &body_scope);
                inner.bind_fun(f, 1);
                ("letrec", f.to_string(), format!("(\\{x} {body})"))
            }
            2 => {
                let f = self.pick(NAMES);
                let (params, ps) = self.params(scope);
                let arity = params.split_whitespace().count();
                let body = self.exp(d, &ps);
                inner.bind_fun(f, arity);
                ("let", f.to_string(), format!("(\\{params} {body})"))
            }
            _ => {
                let x = self.pick(NAMES);
                let e = self.exp(d, scope);
                inner.bind(x);
                ("let", x.to_string(), e)
            }
        };
        let body = self.exp(d, &inner);
        let (s1, s2, s3, c) = (self.sep(), self.sep(), self.sep(), self.opt());
        format!("({kw}{s1}{pat}{s2}{bound}{s3}{body}{c})")
    }

    fn case_exp(&mut self, d: u32, scope: &Scope) -> String {
        let scrut = self.exp(d, scope);
        let mut s = format!("(case{}{scrut}", self.sep());
        let n = self.rng.random_range(1..4);
        for _ in 0..n {
            let mut inner = scope.clone();
            let pat = match self.rng.random_range(0..5) {
                0 => self.rng.random_range(0..5).to_string(),
                1 => "[]".into(),
                2 => {
                    let (a, b) = (self.pick(NAMES), self.pick(NAMES));
                    inner.bind(a);
                    inner.bind(b);
                    format!("[{a} | {b}]")
                }
                3 => "true".into(),
                _ => {
                    let x = self.pick(NAMES);
                    inner.bind(x);
                    x.to_string()
                }
            };
            let body = self.exp(d, &inner);
            s.push_str(&format!("{}({pat} {body})", self.sep()));
        }
        s.push(')');
        s
    }

    fn program(&mut self) -> String {
        let mut scope = Scope::default();
        let mut out = String::new();
        if self.cfg.messy_layout && self.chance(0.3) {
            out.push_str("; generated\n");
        }
        let n = self.rng.random_range(0..=self.cfg.max_defs);
        let mut defined = Vec::new();
        for i in 0..n {
            if i > 0 {
                out.push_str(if self.chance(0.5) { "\n\n" } else { "\n" });
            }
            let depth = self.cfg.max_depth;
            match self.rng.random_range(0..6) {
                0 => {
                    let (a, b) = (self.pick(NAMES), self.pick(NAMES));
                    let (e1, e2) = (self.exp(depth, &scope), self.exp(depth, &scope));
                    out.push_str(&format!("(def [{a} {b}]{}[{e1} {e2}])", self.sep()));
                    scope.bind(a);
                    scope.bind(b);
                    defined.push(a.to_string());
                    defined.push(b.to_string());
                }
                1 => {
                    let f = self.pick(NAMES);
                    let (params, ps) = self.params(&scope);
                    let arity = params.split_whitespace().count();
                    let body = self.exp(depth, &ps);
                    out.push_str(&format!("(def {f}{}(\\{params}{}{body}))", self.sep(), self.sep()));
                    scope.bind_fun(f, arity);
                    defined.push(f.to_string());
                }
                2 => {
                    let f = self.pick(NAMES);
                    let x = self.pick(NAMES);
                    let mut inner = scope.clone();
                    inner.bind_fun(f, 1);
                    let mut body_scope = inner.clone();
                    body_scope.bind(x);
                    let body = self.exp(depth, &body_scope);
                    out.push_str(&format!("(defrec {f} (\\{x} {body}))"));
                    scope = inner;
                    defined.push(f.to_string());
                }
                _ => {
                    let x = self.pick(NAMES);
                    let e = self.exp(depth, &scope);
                    out.push_str(&format!("(def {x}{}{e})", self.sep()));
                    scope.bind(x);
                    defined.push(x.to_string());
                }
            }
        }
        if n > 0 {
            out.push_str("\n\n");
        }
        let body = if defined.is_empty() || self.chance(0.3) {
            self.exp(self.cfg.max_depth, &scope)
        } else {
            let k = self.rng.random_range(1..=defined.len().min(4));
            let picked: Vec<&String> = defined.choose_multiple(&mut self.rng, k).collect();
            format!(
                "(svg [{}])",
                picked.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ")
            )
        };
        out.push_str(&format!("(def main{}{body})", self.sep()));
        if self.chance(0.5) {
            out.push('\n');
        }
        out
    }

    fn pair(&mut self, depth: u32, scope: &[String], diff: f64) -> (String, String) {
        let sc = Scope {
            vars: scope.to_vec(),
            funs: Vec::new(),
        };
        if self.chance(diff) {
            return (self.exp(depth, &sc), self.exp(depth, &sc));
        }
        if depth == 0 || self.chance(0.2) {
            let l = self.leaf(&sc);
            return (l.clone(), l);
        }
        let d = depth - 1;
        match self.rng.random_range(0..3) {
            0 => {
                let op = self.pick(BINOPS);
                let (a1, a2) = self.pair(d, scope, diff);
                let (b1, b2) = self.pair(d, scope, diff);
                (format!("({op} {a1} {b1})"), format!("({op} {a2} {b2})"))
            }
            1 => {
                let n = self.rng.random_range(1..4);
                let (mut l, mut r) = (Vec::new(), Vec::new());
                for _ in 0..n {
                    let (x, y) = self.pair(d, scope, diff);
                    l.push(x);
                    r.push(y);
                }
                (format!("[{}]", l.join(" ")), format!("[{}]", r.join(" ")))
            }
            _ => {
                let fill = self.string();
                let (mut l, mut r) = (vec![fill.clone()], vec![fill]);
                for _ in 0..4 {
                    let (x, y) = self.pair(d, scope, diff);
                    l.push(x);
                    r.push(y);
                }
                (format!("(rect {})", l.join(" ")), format!("(rect {})", r.join(" ")))
            }
        }
    }
}
