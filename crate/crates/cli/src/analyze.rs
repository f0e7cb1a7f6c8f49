use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;

use nilscalars::pcgroup::{lcs_section, nva_gate, truncate_to_class, GateVerdict};
use nilscalars::scalars::{check_full_nondegenerate, commutator_bilinear_map, is_c_small, largest_ring_of_scalars, ring_recognize};

use super::{load_group, precondition, CliError};

fn int(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::from(x.to_string()),
    }
}

fn ints(xs: &[BigInt]) -> Vec<Value> {
    xs.iter().map(int).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorInfo {
    pub name: String,
    pub weight: u32,
    pub order: Option<i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SectionInfo {
    pub index: u32,
    pub rank: usize,
    pub torsion: Vec<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingInfo {
    pub additive: String,
    pub rank: usize,
    pub torsion: Vec<Value>,
    pub unit: Vec<Value>,
    /// `structure[p][q]`: coordinates of `e_p·e_q`.
    pub structure: Vec<Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Quadratic {
    pub trace: Value,
    pub constant: Value,
    pub tau: Vec<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecognitionInfo {
    pub is_z: bool,
    pub rank: usize,
    pub quadratic: Option<Quadratic>,
    /// Rank of `G'/γ₃(G)` is at most 2.
    pub derived_rank_le_2: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub group: String,
    pub class: u32,
    pub generators: Vec<GeneratorInfo>,
    pub sections: Vec<SectionInfo>,
    pub gate: String,
    pub derived_rank: usize,
    pub bilinear_domain: String,
    pub bilinear_codomain: String,
    /// `tensor[i][j]`: coordinates of `f(e_i, e_j)`.
    pub tensor: Vec<Vec<Vec<Value>>>,
    pub ring: RingInfo,
    pub recognition: RecognitionInfo,
    pub c_small: Vec<String>,
    pub notes: Vec<String>,
}

fn show(v: &[Value]) -> String {
    v.iter().map(Value::to_string).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group {}", self.group)?;
        writeln!(f, "class {}", self.class)?;
        for g in &self.generators {
            match g.order {
                Some(m) => writeln!(f, "gen {} weight {} order {m}", g.name, g.weight)?,
                None => writeln!(f, "gen {} weight {}", g.name, g.weight)?,
            }
        }
        for s in &self.sections {
            writeln!(f, "section {} rank {} torsion [{}]", s.index, s.rank, show(&s.torsion))?;
        }
        writeln!(f, "gate {}", self.gate)?;
        writeln!(f, "derived_rank {}", self.derived_rank)?;
        writeln!(f, "bilinear {} x {} -> {}", self.bilinear_domain, self.bilinear_domain, self.bilinear_codomain)?;
        for (i, row) in self.tensor.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                writeln!(f, "tensor {i} {j} = [{}]", show(v))?;
            }
        }
        writeln!(f, "ring {} rank {}", self.ring.additive, self.ring.rank)?;
        writeln!(f, "ring_unit [{}]", show(&self.ring.unit))?;
        for (p, row) in self.ring.structure.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                writeln!(f, "ring_product {p} {q} = [{}]", show(v))?;
            }
        }
        writeln!(f, "is_z {}", self.recognition.is_z)?;
        if let Some(q) = &self.recognition.quadratic {
            writeln!(f, "quadratic tau^2 = {}*tau + {} with tau = [{}]", q.trace, q.constant, show(&q.tau))?;
        }
        writeln!(f, "derived_rank_le_2 {}", self.recognition.derived_rank_le_2)?;
        writeln!(f, "c_small {}", self.c_small.join(" "))?;
        for n in &self.notes {
            writeln!(f, "note {n}")?;
        }
        Ok(())
    }
}

/// Runs the pipeline on a presentation file: sections, the gate, the
/// commutator map of the class-2 quotient, its largest ring of scalars and
/// its recognition.
pub fn cmd_analyze(group: &str) -> Result<AnalysisReport, CliError> {
    let p = load_group(group)?;
    let generators = p
        .gens()
        .iter()
        .enumerate()
        .map(|(i, g)| GeneratorInfo { name: g.name.clone(), weight: g.weight, order: p.order(i) })
        .collect();
    let sections = (1..=p.class())
        .map(|i| {
            let s = lcs_section(&p, i)?;
            Ok(SectionInfo { index: i, rank: s.group.rank(), torsion: ints(&s.group.torsion()) })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let derived_rank = match nva_gate(&p) {
        GateVerdict::Proceed { rank } => rank,
        GateVerdict::Stop => {
            return Err(CliError::Precondition(
                "stop: G'/γ₃(G) is finite, so G is virtually abelian; its first-order theory is decidable and no \
                 interpretation of a ring is attempted"
                    .into(),
            ))
        }
    };
    let t = truncate_to_class(&p, 2)?;
    let q = &t.presentation;
    let cm = commutator_bilinear_map(q).map_err(precondition)?;
    let deg = check_full_nondegenerate(&cm.map);
    if !deg.is_full_nondegenerate() {
        return Err(CliError::Precondition("the commutator map is not full and non-degenerate".into()));
    }
    let ring = largest_ring_of_scalars(&cm.map).map_err(precondition)?;
    let rec = ring_recognize(&ring);
    let tensor = cm.map.tensor().iter().map(|row| row.iter().map(|v| ints(v)).collect()).collect();
    let structure = ring.structure.iter().map(|row| row.iter().map(|v| ints(v)).collect()).collect();
    let mut c_small = Vec::new();
    for g in (0..q.ngens()).filter(|&g| q.weight(g) == 1) {
        if is_c_small(q, &q.generator(g)).map_err(precondition)? {
            c_small.push(q.gens()[g].name.clone());
        }
    }
    let mut notes = Vec::new();
    if p.class() > 2 {
        notes.push(format!("bilinear map and ring computed on the class-2 quotient {}", q.name()));
    }
    notes.push("ring of algebraic integers inside R(f): not computed".into());
    Ok(AnalysisReport {
        group: p.name().into(),
        class: p.class(),
        generators,
        sections,
        gate: format!("proceed (G'/γ₃ has free rank {derived_rank})"),
        derived_rank,
        bilinear_domain: cm.map.domain().to_string(),
        bilinear_codomain: cm.map.codomain().to_string(),
        tensor,
        ring: RingInfo {
            additive: ring.additive.to_string(),
            rank: rec.rank,
            torsion: ints(&rec.torsion),
            unit: ints(&ring.unit),
            structure,
        },
        recognition: RecognitionInfo {
            is_z: rec.is_z,
            rank: rec.rank,
            quadratic: rec.quadratic.as_ref().map(|d| Quadratic { trace: int(&d.trace), constant: int(&d.constant), tau: ints(&d.tau) }),
            derived_rank_le_2: derived_rank <= 2,
        },
        c_small,
        notes,
    })
}
