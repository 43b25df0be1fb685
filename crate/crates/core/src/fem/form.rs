use std::sync::Arc;

use crate::symbolic::{parse, sym, Expr};

use super::{dot, FemError, Mesh, SymMatrix, SymVector};

/// P1 Lagrange space over a triangular mesh.
#[derive(Clone, Debug)]
pub struct FunctionSpace {
    mesh: Arc<Mesh>,
    coords: [Expr; 2],
}

impl FunctionSpace {
    /// Only the `"Lagrange"` family at degree 1 is available.
    pub fn new(mesh: impl Into<Arc<Mesh>>, coords: [Expr; 2], family: &str, degree: u32) -> Result<Self, FemError> {
        if family != "Lagrange" || degree != 1 {
            return Err(FemError::UnsupportedElement {
                family: family.to_string(),
                degree,
            });
        }
        if !coords.iter().all(Expr::is_symbol) || coords[0] == coords[1] {
            return Err(FemError::InvalidCoordinates);
        }
        Ok(FunctionSpace {
            mesh: mesh.into(),
            coords,
        })
    }

    /// P1 Lagrange over `(x, y)`.
    pub fn p1(mesh: impl Into<Arc<Mesh>>) -> Self {
        Self::new(mesh, [sym("x").unwrap(), sym("y").unwrap()], "Lagrange", 1).expect("P1 Lagrange is supported")
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn coords(&self) -> &[Expr; 2] {
        &self.coords
    }

    pub fn family(&self) -> &str {
        "Lagrange"
    }

    pub fn degree(&self) -> u32 {
        1
    }

    /// Local degrees of freedom per element.
    pub fn n_local(&self) -> usize {
        3
    }
}

/// Trial or test function placeholder handed to [`WeakForm::build`].
#[derive(Clone, Debug)]
pub struct Field {
    value: Expr,
    grad: SymVector,
}

impl Field {
    fn reserved(name: &str) -> Field {
        let s = |n: &str| sym(n).expect("reserved names are identifiers");
        Field {
            value: s(name),
            grad: SymVector::from([s(&format!("{name}_x")), s(&format!("{name}_y"))]),
        }
    }

    /// The trial function `u`.
    pub fn trial() -> Field {
        Field::reserved("u")
    }

    /// The test function `v`.
    pub fn test() -> Field {
        Field::reserved("v")
    }

    pub fn value(&self) -> &Expr {
        &self.value
    }

    pub fn grad(&self) -> &SymVector {
        &self.grad
    }
}

/// Bilinear and linear integrands of a weak form, written over the reserved
/// symbols `u, u_x, u_y, v, v_x, v_y` and the space's coordinates.
#[derive(Clone, Debug)]
pub struct WeakForm {
    space: FunctionSpace,
    bilinear: Expr,
    linear: Expr,
}

impl WeakForm {
    pub fn new(space: FunctionSpace, bilinear: Expr, linear: Expr) -> Result<Self, FemError> {
        let [cx, cy] = space.coords();
        let coord_names = [cx.symbol_name().unwrap(), cy.symbol_name().unwrap()];
        let bilinear_ok = ["u", "u_x", "u_y", "v", "v_x", "v_y"];
        for s in bilinear.free_symbols() {
            if !bilinear_ok.contains(&s.as_str()) && !coord_names.contains(&s.as_str()) {
                return Err(FemError::UnexpectedSymbol {
                    integrand: "bilinear",
                    symbol: s,
                });
            }
        }
        for s in linear.free_symbols() {
            if s != "v" && !coord_names.contains(&s.as_str()) {
                return Err(FemError::UnexpectedSymbol {
                    integrand: "linear",
                    symbol: s,
                });
            }
        }
        Ok(WeakForm {
            space,
            bilinear,
            linear,
        })
    }

    /// Builds the integrands from closures over trial and test fields.
    pub fn build(
        space: FunctionSpace,
        bilinear: impl FnOnce(&Field, &Field) -> Expr,
        linear: impl FnOnce(&Field) -> Expr,
    ) -> Result<Self, FemError> {
        let (u, v) = (Field::trial(), Field::test());
        let a = bilinear(&u, &v);
        let l = linear(&v);
        Self::new(space, a, l)
    }

    pub fn space(&self) -> &FunctionSpace {
        &self.space
    }

    pub fn bilinear(&self) -> &Expr {
        &self.bilinear
    }

    pub fn linear(&self) -> &Expr {
        &self.linear
    }
}

/// `−∇·(σ∇u) + λu = f` with homogeneous Neumann data.
#[derive(Clone, Debug)]
pub struct HelmholtzProblem {
    pub sigma: SymMatrix,
    pub lambda: Expr,
    pub f: Expr,
}

impl HelmholtzProblem {
    /// `σ = [[1, −x−y], [x+y, 1]]`, `λ = 1`, `f = −2(x² + y²) + 36`.
    pub fn demo() -> Self {
        Self::from_strings(["1", "-x-y", "x+y", "1"], 1.0, "-2*(x*x + y*y) + 36").expect("demo expressions parse")
    }

    /// Parses the four row-major entries of `σ` and `f`.
    pub fn from_strings(sigma: [&str; 4], lambda: f64, f: &str) -> Result<Self, FemError> {
        let entries = sigma.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(HelmholtzProblem {
            sigma: SymMatrix::new(2, 2, entries)?,
            lambda: Expr::float(lambda),
            f: parse(f)?,
        })
    }

    /// `(∇v, σ∇u) + λ(v, u) = (v, f)`.
    pub fn weak_form(&self, space: FunctionSpace) -> Result<WeakForm, FemError> {
        let flux = |u: &Field, v: &Field| -> Result<Expr, FemError> {
            Ok(dot(v.grad(), &self.sigma.matvec(u.grad())?)? + &self.lambda * v.value() * u.value())
        };
        let (u, v) = (Field::trial(), Field::test());
        let bilinear = flux(&u, &v)?;
        WeakForm::new(space, bilinear, &self.f * v.value())
    }
}
