use serde::{Deserialize, Serialize};

use crate::lie::PhysicalConstants;
use crate::linalg::{tolerance, JetMatrix, JetVector};
use crate::scalar::{render, Scalar};
use crate::weil::AlgebraSpec;

use super::{build_hamiltonian, total_spin_ops, QuantumError};

/// One simultaneous eigenvector of `H`, `S^2` and `S_z` with its three
/// eigenvalues. The vector is left unnormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenRow<S: Scalar> {
    pub label: &'static str,
    pub eigenvector: JetVector<S>,
    pub energy: S,
    pub s_squared: S,
    pub s_z: S,
    /// Closed-form energy `E1 + E2 - alpha*hbar/2` (triplet) or
    /// `E1 + E2 + 3*alpha*hbar/2` (singlet), kept for comparison only.
    pub reference_energy: S,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenRowJson {
    pub eigenvector: Vec<[String; 2]>,
    pub energy: String,
    pub s_squared: String,
    pub s_z: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenTable<S: Scalar> {
    pub rows: Vec<EigenRow<S>>,
}

const STATES: [(&str, [i64; 4], bool); 4] = [
    ("|↑↑⟩", [1, 0, 0, 0], true),
    ("|↑↓⟩ + |↓↑⟩", [0, 1, 1, 0], true),
    ("|↓↓⟩", [0, 0, 0, 1], true),
    ("|↑↓⟩ - |↓↑⟩", [0, 1, -1, 0], false),
];

/// Eigenvalue of `m` at `v`, checked by the residual `m v - lambda v`.
fn eigenvalue<S: Scalar>(m: &JetMatrix<S>, v: &JetVector<S>, what: &str) -> Result<S, QuantumError> {
    let tol = tolerance::<S>() * m.max_abs().max(1.0);
    let mv = m.apply(v)?;
    let i = (0..v.dim())
        .find(|&i| !v.get(i).std_is_negligible(tol))
        .ok_or_else(|| QuantumError::NotEigenvector("zero vector".into()))?;
    let ratio = mv.get(i).checked_div(v.get(i))?;
    if !ratio.im().is_negligible(tol) || ratio.has_nilpotent_part() {
        return Err(QuantumError::NotEigenvector(format!("{what} eigenvalue is not a real number")));
    }
    let lambda = ratio.re().std_part().clone();
    if !mv.checked_sub(&v.scale_real(&lambda))?.is_negligible(tol) {
        return Err(QuantumError::NotEigenvector(format!("residual of {what} does not vanish")));
    }
    Ok(lambda)
}

/// Triplet and singlet states with their energies, `S^2` and `S_z`, each
/// obtained by applying the operator to the state.
pub fn eigentable<S: Scalar>(c: &PhysicalConstants<S>) -> Result<EigenTable<S>, QuantumError> {
    if c.alpha().is_zero() {
        return Err(QuantumError::InvalidArgument("alpha must be nonzero".into()));
    }
    let alg = AlgebraSpec::reals(S::BACKEND);
    let h = build_hamiltonian(c, &alg)?;
    let (s_sq, s_z) = total_spin_ops(c, &alg)?;
    let base = c.e1().clone() + c.e2().clone();
    let half_alpha_hbar = c.alpha().clone() * c.hbar().clone() / S::from_i64(2);
    let mut rows = Vec::with_capacity(4);
    for (label, coords, triplet) in STATES {
        let v = JetVector::from_i64s(&alg, &coords);
        let reference_energy = if triplet {
            base.clone() - half_alpha_hbar.clone()
        } else {
            base.clone() + half_alpha_hbar.clone() * S::from_i64(3)
        };
        rows.push(EigenRow {
            label,
            energy: eigenvalue(&h, &v, "H")?,
            s_squared: eigenvalue(&s_sq, &v, "S^2")?,
            s_z: eigenvalue(&s_z, &v, "S_z")?,
            eigenvector: v,
            reference_energy,
        });
    }
    Ok(EigenTable { rows })
}

fn render_vector<S: Scalar>(v: &JetVector<S>) -> String {
    let parts: Vec<String> = v.entries().iter().map(|z| z.to_string()).collect();
    format!("({})", parts.join(", "))
}

impl<S: Scalar> EigenTable<S> {
    pub fn to_json_rows(&self) -> Vec<EigenRowJson> {
        self.rows
            .iter()
            .map(|r| EigenRowJson {
                eigenvector: r
                    .eigenvector
                    .entries()
                    .iter()
                    .map(|z| [render(z.re().std_part()), render(z.im().std_part())])
                    .collect(),
                energy: render(&r.energy),
                s_squared: render(&r.s_squared),
                s_z: render(&r.s_z),
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_rows()).expect("serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["state", "eigenvector", "energy", "s_squared", "s_z"]).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.label.to_string(),
                render_vector(&r.eigenvector),
                render(&r.energy),
                render(&r.s_squared),
                render(&r.s_z),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    /// Aligned markdown table with the closed-form reference energies in an
    /// extra column and a note on how they relate to the computed ones.
    pub fn to_markdown(&self) -> String {
        let header = ["State", "Eigenvector", "Energy", "Reference energy", "S²", "S_z"];
        let body: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.label.to_string(),
                    render_vector(&r.eigenvector),
                    render(&r.energy),
                    format!("{}*", render(&r.reference_energy)),
                    render(&r.s_squared),
                    render(&r.s_z),
                ]
            })
            .collect();
        let width = |i: usize| {
            body.iter().map(|row| row[i].chars().count()).chain([header[i].chars().count()]).max().unwrap_or(0)
        };
        let widths: Vec<usize> = (0..6).map(width).collect();
        let line = |cells: Vec<String>| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            format!("| {} |\n", padded.join(" | "))
        };
        let mut out = line(header.iter().map(|s| s.to_string()).collect());
        out.push_str(&line(widths.iter().map(|&w| "-".repeat(w)).collect()));
        for row in body {
            out.push_str(&line(row.to_vec()));
        }
        out.push_str(
            "\n*Reference energy: closed forms E1+E2-αħ/2 (triplet) and E1+E2+3αħ/2 (singlet). \
             Applying H with S = ħσ/2 gives E1+E2-αħ²/4 and E1+E2+3αħ²/4, so the two columns agree only at ħ = 2.\n",
        );
        out
    }
}
