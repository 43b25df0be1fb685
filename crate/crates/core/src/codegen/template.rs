use std::fmt::Write;

use crate::fem::InstantiatedForm;

use super::program::Op;
use super::{compile_form, CodegenError, CompiledForm, KernelProgram};

/// Placeholders every kernel template must contain exactly once.
pub const PLACEHOLDERS: [&str; 5] = ["INTEGRAND_BODY", "N_QUAD", "N_LOCAL", "ELEMS_PER_BLOCK", "MAX_NZ"];

const DEFAULT_TEMPLATE: &str = include_str!("kernel.cu.in");

/// Kernel source text with `{{NAME}}` placeholders.
#[derive(Clone, Debug)]
pub struct KernelTemplate {
    text: String,
}

impl KernelTemplate {
    pub fn new(text: impl Into<String>) -> Result<Self, CodegenError> {
        let text = text.into();
        for name in PLACEHOLDERS {
            let count = text.matches(&marker(name)).count();
            if count != 1 {
                return Err(CodegenError::Template(format!(
                    "placeholder {name} occurs {count} times"
                )));
            }
        }
        Ok(KernelTemplate { text })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Substitutes every placeholder; each one needs a value.
    pub fn render(&self, values: &[(&str, String)]) -> Result<String, CodegenError> {
        let mut out = self.text.clone();
        for name in PLACEHOLDERS {
            let value = values
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| v)
                .ok_or(CodegenError::MissingPlaceholder(name))?;
            out = out.replacen(&marker(name), value, 1);
        }
        if out.contains("{{") {
            return Err(CodegenError::Template("unresolved placeholder in output".into()));
        }
        Ok(out)
    }
}

impl Default for KernelTemplate {
    fn default() -> Self {
        KernelTemplate::new(DEFAULT_TEMPLATE).expect("built-in template is well formed")
    }
}

fn marker(name: &str) -> String {
    format!("{{{{{name}}}}}")
}

/// Launch parameters substituted into the template. Quadrature size and the
/// local dimension come from the form itself.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceConfig {
    pub elems_per_block: Option<usize>,
    pub max_nz: Option<usize>,
}

pub fn emit_source(f: &InstantiatedForm, cfg: &SourceConfig) -> Result<String, CodegenError> {
    emit_compiled_source(&compile_form(f)?, cfg)
}

pub fn emit_compiled_source(cf: &CompiledForm, cfg: &SourceConfig) -> Result<String, CodegenError> {
    let elems = cfg
        .elems_per_block
        .ok_or(CodegenError::MissingPlaceholder("ELEMS_PER_BLOCK"))?;
    let max_nz = cfg.max_nz.ok_or(CodegenError::MissingPlaceholder("MAX_NZ"))?;
    KernelTemplate::default().render(&[
        ("INTEGRAND_BODY", integrand_body(cf)),
        ("N_QUAD", cf.n_quad().to_string()),
        ("N_LOCAL", cf.n_local.to_string()),
        ("ELEMS_PER_BLOCK", elems.to_string()),
        ("MAX_NZ", max_nz.to_string()),
    ])
}

fn integrand_body(cf: &CompiledForm) -> String {
    let mut s = String::new();
    let table = |name: &str, vals: Vec<f64>| {
        let vals: Vec<String> = vals.into_iter().map(c_literal).collect();
        format!("__constant__ double {name}[N_QUAD] = {{{}}};\n", vals.join(", "))
    };
    s += &table("QUAD_XI", cf.rule.points().iter().map(|p| p[0]).collect());
    s += &table("QUAD_ETA", cf.rule.points().iter().map(|p| p[1]).collect());
    s += &table("QUAD_W", cf.rule.weights().to_vec());
    s.push('\n');

    for (k, p) in cf.bilinear.iter().enumerate() {
        render_function(&mut s, &format!("bilinear_{}_{}", k / cf.n_local, k % cf.n_local), p);
    }
    for (k, p) in cf.linear.iter().enumerate() {
        render_function(&mut s, &format!("linear_{k}"), p);
    }
    render_dispatch(&mut s, "bilinear_entry", cf.bilinear.len(), |k| {
        format!("bilinear_{}_{}", k / cf.n_local, k % cf.n_local)
    });
    render_dispatch(&mut s, "linear_entry", cf.linear.len(), |k| format!("linear_{k}"));
    s.truncate(s.trim_end().len());
    s
}

fn render_function(s: &mut String, name: &str, p: &KernelProgram) {
    writeln!(s, "__device__ double {name}(const double* a) {{").unwrap();
    for (i, op) in p.instructions().iter().enumerate() {
        let rhs = match *op {
            Op::LoadArg(k) => format!("a[{k}]"),
            Op::LoadConst(c) => c_literal(p.constants()[c as usize]),
            Op::Add(x, y) => format!("r{x} + r{y}"),
            Op::Sub(x, y) => format!("r{x} - r{y}"),
            Op::Mul(x, y) => format!("r{x} * r{y}"),
            Op::Div(x, y) => format!("r{x} / r{y}"),
            Op::Neg(x) => format!("-r{x}"),
            Op::PowInt(x, n) => format!("pow(r{x}, {n}.0)"),
            Op::Sin(x) => format!("sin(r{x})"),
            Op::Cos(x) => format!("cos(r{x})"),
            Op::Sqrt(x) => format!("sqrt(r{x})"),
        };
        writeln!(s, "    const double r{i} = {rhs};").unwrap();
    }
    writeln!(s, "    return r{};\n}}\n", p.result()).unwrap();
}

fn render_dispatch(s: &mut String, name: &str, n: usize, callee: impl Fn(usize) -> String) {
    writeln!(s, "__device__ double {name}(int k, const double* a) {{").unwrap();
    writeln!(s, "    switch (k) {{").unwrap();
    for k in 0..n {
        writeln!(s, "    case {k}: return {}(a);", callee(k)).unwrap();
    }
    writeln!(s, "    default: return 0.0;\n    }}\n}}\n").unwrap();
}

fn c_literal(v: f64) -> String {
    if v.is_nan() {
        "nan(\"\")".into()
    } else if v.is_infinite() {
        if v > 0.0 { "INFINITY" } else { "-INFINITY" }.into()
    } else {
        format!("{v:?}")
    }
}
