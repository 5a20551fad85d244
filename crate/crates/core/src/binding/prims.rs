//! Built-in names. They resolve without a binder and never block safety
//! checks; the parameter names of the drawing primitives seed variable name
//! suggestions.

/// Built-in functions with their parameter names.
pub const PRIMITIVES: &[(&str, &[&str])] = &[
    ("+", &["x", "y"]),
    ("-", &["x", "y"]),
    ("*", &["x", "y"]),
    ("/", &["x", "y"]),
    ("<", &["x", "y"]),
    (">", &["x", "y"]),
    ("=", &["x", "y"]),
    ("<=", &["x", "y"]),
    (">=", &["x", "y"]),
    ("mod", &["x", "y"]),
    ("pow", &["base", "exponent"]),
    ("sqrt", &["x"]),
    ("sin", &["angle"]),
    ("cos", &["angle"]),
    ("round", &["x"]),
    ("floor", &["x"]),
    ("ceiling", &["x"]),
    ("abs", &["x"]),
    ("min", &["x", "y"]),
    ("max", &["x", "y"]),
    ("not", &["b"]),
    ("and", &["a", "b"]),
    ("or", &["a", "b"]),
    ("toString", &["x"]),
    ("map", &["f", "xs"]),
    ("foldl", &["f", "init", "xs"]),
    ("foldr", &["f", "init", "xs"]),
    ("concat", &["lists"]),
    ("append", &["xs", "ys"]),
    ("cons", &["x", "xs"]),
    ("reverse", &["xs"]),
    ("range", &["lo", "hi"]),
    ("zip", &["xs", "ys"]),
    ("nth", &["xs", "n"]),
    ("len", &["xs"]),
    ("svg", &["shapes"]),
    ("rect", &["fill", "x", "y", "w", "h"]),
    ("square", &["fill", "x", "y", "side"]),
    ("circle", &["fill", "cx", "cy", "r"]),
    ("ellipse", &["fill", "cx", "cy", "rx", "ry"]),
    ("line", &["stroke", "width", "x1", "y1", "x2", "y2"]),
    ("polygon", &["fill", "stroke", "width", "points"]),
    ("polyline", &["fill", "stroke", "width", "points"]),
    ("path", &["stroke", "width", "commands"]),
    ("text", &["x", "y", "content"]),
];

pub fn is_primitive(name: &str) -> bool {
    PRIMITIVES.iter().any(|(n, _)| *n == name)
}

/// Parameter names of a built-in function.
pub fn primitive_params(name: &str) -> Option<&'static [&'static str]> {
    PRIMITIVES.iter().find(|(n, _)| *n == name).map(|(_, ps)| *ps)
}
