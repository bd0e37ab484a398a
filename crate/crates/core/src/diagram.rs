//! The diagram data model, arc relations and interaction-structure classes.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An arc `(i, j)` with `i < j`, in linear coordinates.
pub type Arc = (usize, usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArcKind {
    InteriorR,
    InteriorS,
    Exterior,
}

/// True iff the two arcs interleave.
pub fn arcs_cross(a: Arc, b: Arc) -> bool {
    (a.0 < b.0 && b.0 < a.1 && a.1 < b.1) || (b.0 < a.0 && a.0 < b.1 && b.1 < a.1)
}

#[derive(Serialize, Deserialize)]
struct RawDiagram {
    n: usize,
    backbones: Vec<[usize; 2]>,
    arcs: Vec<[usize; 2]>,
}

/// A partial matching on `1..=n` together with a partition of `1..=n` into one
/// or two contiguous backbones. Backbones may be empty; an empty backbone at
/// position `lo` is stored as `(lo, lo - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawDiagram", into = "RawDiagram")]
pub struct Diagram {
    n: usize,
    backbones: Vec<(usize, usize)>,
    arcs: Vec<Arc>,
}

impl TryFrom<RawDiagram> for Diagram {
    type Error = Error;
    fn try_from(raw: RawDiagram) -> Result<Self> {
        Diagram::new(
            raw.n,
            raw.backbones.iter().map(|b| (b[0], b[1])).collect(),
            raw.arcs.iter().map(|a| (a[0], a[1])).collect(),
        )
    }
}

impl From<Diagram> for RawDiagram {
    fn from(d: Diagram) -> Self {
        RawDiagram {
            n: d.n,
            backbones: d.backbones.iter().map(|&(lo, hi)| [lo, hi]).collect(),
            arcs: d.arcs.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

impl Diagram {
    /// Validating constructor. Arcs given as `(j, i)` are normalised.
    pub fn new(n: usize, backbones: Vec<(usize, usize)>, arcs: Vec<Arc>) -> Result<Self> {
        if backbones.is_empty() {
            return Err(Error::BadPartition("no backbones".into()));
        }
        if backbones.len() > 2 {
            return Err(Error::TooManyBackbones(backbones.len()));
        }
        let mut next = 1;
        for &(lo, hi) in &backbones {
            if lo != next || hi + 1 < lo {
                return Err(Error::BadPartition(format!(
                    "interval [{lo}, {hi}] does not continue at {next}"
                )));
            }
            next = hi + 1;
        }
        if next != n + 1 {
            return Err(Error::BadPartition(format!("backbones end at {} but n = {n}", next - 1)));
        }
        let mut seen = vec![false; n + 1];
        let mut norm = Vec::with_capacity(arcs.len());
        for (a, b) in arcs {
            let (i, j) = if a <= b { (a, b) } else { (b, a) };
            for v in [i, j] {
                if v == 0 || v > n {
                    return Err(Error::OutOfRange { value: v, range: format!("1..={n}") });
                }
            }
            if i == j {
                return Err(Error::SharedVertex(i));
            }
            for v in [i, j] {
                if seen[v] {
                    return Err(Error::SharedVertex(v));
                }
                seen[v] = true;
            }
            norm.push((i, j));
        }
        norm.sort_unstable();
        Ok(Diagram { n, backbones, arcs: norm })
    }

    pub fn one_backbone(n: usize, arcs: Vec<Arc>) -> Result<Self> {
        Diagram::new(n, vec![(1, n)], arcs)
    }

    /// Two backbones of lengths `n_r` and `n_s`; arcs in linear coordinates.
    pub fn two_backbone(n_r: usize, n_s: usize, arcs: Vec<Arc>) -> Result<Self> {
        Diagram::new(n_r + n_s, vec![(1, n_r), (n_r + 1, n_r + n_s)], arcs)
    }

    /// Builds a diagram from backbone lengths.
    pub fn from_lengths(lengths: &[usize], arcs: Vec<Arc>) -> Result<Self> {
        let mut bb = Vec::with_capacity(lengths.len());
        let mut lo = 1;
        for &len in lengths {
            bb.push((lo, lo + len - 1));
            lo += len;
        }
        Diagram::new(lo - 1, bb, arcs)
    }

    /// Same backbones, different arc set.
    pub fn with_arcs(&self, arcs: Vec<Arc>) -> Result<Self> {
        Diagram::new(self.n, self.backbones.clone(), arcs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn backbones(&self) -> &[(usize, usize)] {
        &self.backbones
    }

    pub fn num_backbones(&self) -> usize {
        self.backbones.len()
    }

    pub fn backbone_lengths(&self) -> Vec<usize> {
        self.backbones.iter().map(|&(lo, hi)| hi + 1 - lo).collect()
    }

    /// Arcs sorted by left endpoint.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// `partner[v]` is the mate of `v`, or 0 when `v` is unpaired.
    pub fn partners(&self) -> Vec<usize> {
        let mut p = vec![0; self.n + 1];
        for &(i, j) in &self.arcs {
            p[i] = j;
            p[j] = i;
        }
        p
    }

    /// Index of the backbone holding vertex `v`.
    pub fn backbone_of(&self, v: usize) -> usize {
        self.backbones.iter().position(|&(lo, hi)| lo <= v && v <= hi).unwrap_or(0)
    }

    pub fn kind(&self, a: Arc) -> ArcKind {
        match (self.backbone_of(a.0), self.backbone_of(a.1)) {
            (0, 0) => ArcKind::InteriorR,
            (1, 1) => ArcKind::InteriorS,
            _ => ArcKind::Exterior,
        }
    }

    pub fn arcs_of_kind(&self, kind: ArcKind) -> Vec<Arc> {
        self.arcs.iter().copied().filter(|&a| self.kind(a) == kind).collect()
    }

    pub fn is_two_backbone(&self) -> bool {
        self.backbones.len() == 2
    }

    /// Length of `R` in a two-backbone diagram, `n` otherwise.
    pub fn r_len(&self) -> usize {
        self.backbones[0].1 + 1 - self.backbones[0].0
    }

    fn require_two(&self) -> Result<()> {
        if self.is_two_backbone() {
            Ok(())
        } else {
            Err(Error::NotTwoBackbones)
        }
    }

    /// Finds two dependent interior arcs, one per backbone, neither of which
    /// subsumes the other. Arcs are reported in linear coordinates.
    pub fn detect_zigzag(&self) -> Result<Option<ZigZag>> {
        self.require_two()?;
        let r_arcs = self.arcs_of_kind(ArcKind::InteriorR);
        let s_arcs = self.arcs_of_kind(ArcKind::InteriorS);
        let ext = self.arcs_of_kind(ArcKind::Exterior);
        let inside = |v: usize, a: Arc| a.0 < v && v < a.1;
        for &ra in &r_arcs {
            for &sa in &s_arcs {
                let Some(&dep) = ext.iter().find(|e| inside(e.0, ra) && inside(e.1, sa)) else {
                    continue;
                };
                let r_in_s = ext.iter().all(|e| !inside(e.0, ra) || inside(e.1, sa));
                let s_in_r = ext.iter().all(|e| !inside(e.1, sa) || inside(e.0, ra));
                if !r_in_s && !s_in_r {
                    return Ok(Some(ZigZag { r_arc: ra, s_arc: sa, exterior: dep }));
                }
            }
        }
        Ok(None)
    }

    /// Checks the three AP clauses in order and reports the first failure.
    pub fn is_ap_structure(&self) -> Result<ApReport> {
        self.require_two()?;
        let fail = |clause: ApClause, detail: String| ApReport { is_ap: false, violation: Some(clause), detail };
        for kind in [ArcKind::InteriorR, ArcKind::InteriorS] {
            let arcs = self.arcs_of_kind(kind);
            if let Some((a, b)) = first_crossing(&arcs) {
                return Ok(fail(
                    ApClause::StrandPseudoknot,
                    format!("interior arcs {a:?} and {b:?} cross"),
                ));
            }
        }
        // Exterior arcs (i,h), (i',h') conflict iff i < i' and h < h' with h
        // read 5'->3', which is exactly linear crossing.
        let ext = self.arcs_of_kind(ArcKind::Exterior);
        if let Some((a, b)) = first_crossing(&ext) {
            return Ok(fail(
                ApClause::ExteriorCrossing,
                format!("exterior arcs {a:?} and {b:?} bind in parallel"),
            ));
        }
        if let Some(z) = self.detect_zigzag()? {
            return Ok(fail(
                ApClause::ZigZag,
                format!("zig-zag {:?} / {:?} via {:?}", z.r_arc, z.s_arc, z.exterior),
            ));
        }
        Ok(ApReport { is_ap: true, violation: None, detail: "all clauses hold".into() })
    }
}

fn first_crossing(arcs: &[Arc]) -> Option<(Arc, Arc)> {
    for (k, &a) in arcs.iter().enumerate() {
        for &b in &arcs[k + 1..] {
            if arcs_cross(a, b) {
                return Some((a, b));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZigZag {
    pub r_arc: Arc,
    pub s_arc: Arc,
    pub exterior: Arc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ApClause {
    /// Clause 1: an interior pseudoknot on one strand.
    StrandPseudoknot,
    /// Clause 2: crossing exterior arcs.
    ExteriorCrossing,
    /// Clause 3: a zig-zag.
    ZigZag,
}

impl ApClause {
    pub fn number(self) -> u8 {
        match self {
            ApClause::StrandPseudoknot => 1,
            ApClause::ExteriorCrossing => 2,
            ApClause::ZigZag => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ApReport {
    pub is_ap: bool,
    pub violation: Option<ApClause>,
    pub detail: String,
}

/// Two nucleotide strings over `{A, C, G, U}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SequencePair {
    r: Vec<u8>,
    s: Vec<u8>,
}

impl SequencePair {
    /// Uppercases, maps `T` to `U` and rejects anything else. One strand may
    /// be empty, which reduces to single-strand folding.
    pub fn new(r: &str, s: &str) -> Result<Self> {
        let r = normalize(r, 'R')?;
        let s = normalize(s, 'S')?;
        if r.is_empty() && s.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(SequencePair { r, s })
    }

    pub fn r(&self) -> &[u8] {
        &self.r
    }

    pub fn s(&self) -> &[u8] {
        &self.s
    }

    pub fn r_str(&self) -> &str {
        std::str::from_utf8(&self.r).unwrap_or_default()
    }

    pub fn s_str(&self) -> &str {
        std::str::from_utf8(&self.s).unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.r.len() + self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Nucleotide at linear position `v` (R then S).
    pub fn base(&self, v: usize) -> u8 {
        if v <= self.r.len() {
            self.r[v - 1]
        } else {
            self.s[v - 1 - self.r.len()]
        }
    }
}

fn normalize(seq: &str, strand: char) -> Result<Vec<u8>> {
    seq.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(pos, c)| match c.to_ascii_uppercase() {
            'A' => Ok(b'A'),
            'C' => Ok(b'C'),
            'G' => Ok(b'G'),
            'U' | 'T' => Ok(b'U'),
            _ => Err(Error::InvalidNucleotide { strand, ch: c, pos: pos + 1 }),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_examples() {
        assert!(Diagram::one_backbone(4, vec![(1, 3), (2, 4)]).is_ok());
        assert_eq!(
            Diagram::two_backbone(2, 2, vec![(1, 3), (1, 4)]),
            Err(Error::SharedVertex(1))
        );
        let d = Diagram::two_backbone(2, 2, vec![(1, 3), (2, 4)]).unwrap();
        assert!(d.arcs().iter().all(|&a| d.kind(a) == ArcKind::Exterior));
        assert!(matches!(
            Diagram::one_backbone(4, vec![(1, 5)]),
            Err(Error::OutOfRange { value: 5, .. })
        ));
        assert!(matches!(Diagram::new(4, vec![(1, 2), (4, 4)], vec![]), Err(Error::BadPartition(_))));
        assert!(matches!(
            Diagram::new(3, vec![(1, 1), (2, 2), (3, 3)], vec![]),
            Err(Error::TooManyBackbones(3))
        ));
    }

    #[test]
    fn crossing_examples() {
        assert!(arcs_cross((1, 3), (2, 4)));
        assert!(!arcs_cross((1, 4), (2, 3)));
        assert!(!arcs_cross((1, 2), (3, 4)));
    }

    #[test]
    fn empty_backbones_are_allowed() {
        let d = Diagram::new(3, vec![(1, 0), (1, 3)], vec![(1, 3)]).unwrap();
        assert_eq!(d.backbone_lengths(), vec![0, 3]);
        assert_eq!(d.kind((1, 3)), ArcKind::InteriorS);
    }

    #[test]
    fn zigzag_figure() {
        // S is indexed from its 3' end in the figure; S_k sits at 5' position 6 - k.
        let s = |k: usize| 6 + (6 - k);
        let d = Diagram::two_backbone(
            6,
            5,
            vec![(1, 4), (s(5), s(2)), (2, s(1)), (3, s(3)), (6, s(4))],
        )
        .unwrap();
        let z = d.detect_zigzag().unwrap().unwrap();
        assert_eq!(z.r_arc, (1, 4));
        assert_eq!(z.s_arc, (s(5), s(2)));
        assert_eq!(z.exterior, (3, s(3)));
        let rep = d.is_ap_structure().unwrap();
        assert_eq!(rep.violation, Some(ApClause::ZigZag));
    }

    #[test]
    fn zigzag_absent_when_subsumed() {
        let d = Diagram::two_backbone(2, 2, vec![]).unwrap();
        assert_eq!(d.detect_zigzag().unwrap(), None);
        // R arc (1,6) and S arc (7,12) both enclose every exterior endpoint.
        let d = Diagram::two_backbone(6, 6, vec![(1, 6), (7, 12), (2, 11), (3, 10), (5, 8)]).unwrap();
        assert_eq!(d.detect_zigzag().unwrap(), None);
        assert!(d.is_ap_structure().unwrap().is_ap);
        let one = Diagram::one_backbone(4, vec![]).unwrap();
        assert_eq!(one.detect_zigzag(), Err(Error::NotTwoBackbones));
    }

    #[test]
    fn ap_clauses() {
        let crossing = Diagram::two_backbone(2, 2, vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(crossing.is_ap_structure().unwrap().violation, Some(ApClause::ExteriorCrossing));
        let nested = Diagram::two_backbone(2, 2, vec![(1, 4), (2, 3)]).unwrap();
        assert!(nested.is_ap_structure().unwrap().is_ap);
        let pk = Diagram::two_backbone(4, 1, vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(pk.is_ap_structure().unwrap().violation, Some(ApClause::StrandPseudoknot));
    }

    #[test]
    fn sequences() {
        let p = SequencePair::new("acgt", "U").unwrap();
        assert_eq!(p.r(), b"ACGU");
        assert_eq!(p.base(5), b'U');
        assert!(matches!(SequencePair::new("AXG", "A"), Err(Error::InvalidNucleotide { ch: 'X', pos: 2, .. })));
        assert_eq!(SequencePair::new("", ""), Err(Error::EmptySequence));
        assert!(SequencePair::new("AAA", "").is_ok());
    }

    #[test]
    fn json_round_trip() {
        let d = Diagram::two_backbone(2, 2, vec![(2, 4), (1, 3)]).unwrap();
        let text = serde_json::to_string(&d).unwrap();
        assert_eq!(text, r#"{"n":4,"backbones":[[1,2],[3,4]],"arcs":[[1,3],[2,4]]}"#);
        let back: Diagram = serde_json::from_str(&text).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<Diagram>(r#"{"n":2,"backbones":[[1,2]],"arcs":[[1,1]]}"#).is_err());
    }
}
