//! The genus-zero interaction grammar: nonterminals, table index spaces and
//! production rules.
//!
//! R occupies local positions `1..=n_r`, S local positions `1..=n_s`; arcs are
//! emitted in linear coordinates (S position `k` is `n_r + k`). Intervals
//! `[x, x-1]` are empty. Region cells `(i, j; h, l)` cover `R[i..=j]` and
//! `S[h..=l]`; the exterior arc joining R `i` and S `l` nests around the one
//! joining R `j` and S `h`.

use serde::{Deserialize, Serialize};

use rrfold_core::SequencePair;

use crate::energy::EnergyModel;

/// The thirteen grammar symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Nonterminal {
    I,
    PT,
    T,
    Hs,
    Hy,
    HyStar,
    G,
    GStar,
    U,
    V,
    W,
    X,
    Y,
}

impl Nonterminal {
    pub const ALL: [Nonterminal; 13] = [
        Nonterminal::I,
        Nonterminal::PT,
        Nonterminal::T,
        Nonterminal::Hs,
        Nonterminal::Hy,
        Nonterminal::HyStar,
        Nonterminal::G,
        Nonterminal::GStar,
        Nonterminal::U,
        Nonterminal::V,
        Nonterminal::W,
        Nonterminal::X,
        Nonterminal::Y,
    ];
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strand {
    R,
    S,
}

/// Concrete DP tables. Strand-level secondary-structure tables are `I` with
/// one empty interval; `+` variants hold at least one arc; `Pair` tables have
/// their interval endpoints paired.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Table {
    SecR,
    SecS,
    SecPlusR,
    SecPlusS,
    PairR,
    PairS,
    GStarR,
    GStarS,
    GR,
    GS,
    VR,
    VS,
    HyStar,
    Hy,
    U,
    Hs,
    W,
    X,
    Y,
    T,
    PtT,
    PtHy,
    IPrime,
    I,
}

pub const TABLES: [Table; 24] = [
    Table::SecR,
    Table::SecS,
    Table::SecPlusR,
    Table::SecPlusS,
    Table::PairR,
    Table::PairS,
    Table::GStarR,
    Table::GStarS,
    Table::GR,
    Table::GS,
    Table::VR,
    Table::VS,
    Table::HyStar,
    Table::Hy,
    Table::U,
    Table::Hs,
    Table::W,
    Table::X,
    Table::Y,
    Table::T,
    Table::PtT,
    Table::PtHy,
    Table::IPrime,
    Table::I,
];

const REGION_TABLES: [Table; 12] = [
    Table::HyStar,
    Table::Hy,
    Table::U,
    Table::Hs,
    Table::W,
    Table::X,
    Table::Y,
    Table::T,
    Table::PtT,
    Table::PtHy,
    Table::IPrime,
    Table::I,
];

impl Table {
    pub fn nonterminal(self) -> Nonterminal {
        use Table::*;
        match self {
            SecR | SecS | SecPlusR | SecPlusS | PairR | PairS | IPrime | I => Nonterminal::I,
            GStarR | GStarS => Nonterminal::GStar,
            GR | GS => Nonterminal::G,
            VR | VS => Nonterminal::V,
            HyStar => Nonterminal::HyStar,
            Hy => Nonterminal::Hy,
            U => Nonterminal::U,
            Hs => Nonterminal::Hs,
            W => Nonterminal::W,
            X => Nonterminal::X,
            Y => Nonterminal::Y,
            T => Nonterminal::T,
            PtT | PtHy => Nonterminal::PT,
        }
    }

    /// Number of indices of a cell.
    pub fn arity(self) -> usize {
        match self.kind() {
            Kind::Interval(_) => 2,
            _ => 4,
        }
    }

    fn kind(self) -> Kind {
        use Table::*;
        match self {
            SecR | SecPlusR | PairR => Kind::Interval(Strand::R),
            SecS | SecPlusS | PairS => Kind::Interval(Strand::S),
            GStarR | GR | VR => Kind::Quad(Strand::R),
            GStarS | GS | VS => Kind::Quad(Strand::S),
            _ => Kind::Region,
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Copy)]
enum Kind {
    Interval(Strand),
    Quad(Strand),
    Region,
}

/// One DP cell. Two-index tables use `(i, j)` only; gap tables on one strand
/// read `(i, j; h, l)` as `(a, x1; x2, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cell {
    pub table: Table,
    pub i: u16,
    pub j: u16,
    pub h: u16,
    pub l: u16,
}

impl Cell {
    fn new(table: Table, i: usize, j: usize, h: usize, l: usize) -> Self {
        Cell { table, i: i as u16, j: j as u16, h: h as u16, l: l as u16 }
    }
}

/// Weight attached to a production.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Factor {
    One,
    /// Emits the linear arc `(i, j)`; `stacked` when `(i+1, j-1)` is emitted as its stacked partner.
    Arc { i: u16, j: u16, stacked: bool },
}

/// Index spaces and production rules for one sequence pair.
#[derive(Clone, Debug)]
pub struct Grammar {
    n_r: usize,
    n_s: usize,
    theta: usize,
    pairable: Vec<bool>,
    iv_off: [Vec<usize>; 2],
    iv_count: [usize; 2],
    quad_off: [Vec<usize>; 2],
    quad_count: [usize; 2],
}

fn interval_offsets(len: usize) -> (Vec<usize>, usize) {
    let mut off = vec![0; len + 2];
    let mut acc = 0;
    for (x, o) in off.iter_mut().enumerate().skip(1) {
        *o = acc;
        acc += len + 2 - x;
    }
    (off, acc)
}

fn quad_offsets(len: usize) -> (Vec<usize>, usize) {
    let mut off = vec![0; (len + 1) * (len + 1)];
    let mut acc = 0;
    for a in 1..=len {
        for d in a..=len {
            off[a * (len + 1) + d] = acc;
            acc += (d - a + 1) * (d - a + 1);
        }
    }
    (off, acc)
}

impl Grammar {
    pub fn new(pair: &SequencePair, model: &EnergyModel) -> Self {
        let (n_r, n_s) = (pair.r().len(), pair.s().len());
        let n = n_r + n_s;
        let mut pairable = vec![false; (n + 1) * (n + 1)];
        for i in 1..=n {
            for j in i + 1..=n {
                pairable[i * (n + 1) + j] = model.arc_energy(pair, i, j).is_some();
            }
        }
        let (r_off, r_count) = interval_offsets(n_r);
        let (s_off, s_count) = interval_offsets(n_s);
        let (rq_off, rq_count) = quad_offsets(n_r);
        let (sq_off, sq_count) = quad_offsets(n_s);
        Grammar {
            n_r,
            n_s,
            theta: model.theta,
            pairable,
            iv_off: [r_off, s_off],
            iv_count: [r_count, s_count],
            quad_off: [rq_off, sq_off],
            quad_count: [rq_count, sq_count],
        }
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    fn len(&self, st: Strand) -> usize {
        match st {
            Strand::R => self.n_r,
            Strand::S => self.n_s,
        }
    }

    fn linear(&self, st: Strand, x: usize) -> usize {
        match st {
            Strand::R => x,
            Strand::S => self.n_r + x,
        }
    }

    fn pairable(&self, i: usize, j: usize) -> bool {
        self.pairable[i * (self.n_r + self.n_s + 1) + j]
    }

    fn can(&self, st: Strand, x: usize, y: usize) -> bool {
        self.pairable(self.linear(st, x), self.linear(st, y))
    }

    fn can_ext(&self, i: usize, l: usize) -> bool {
        self.pairable(i, self.n_r + l)
    }

    fn arc(&self, st: Strand, x: usize, y: usize, stacked: bool) -> Factor {
        Factor::Arc { i: self.linear(st, x) as u16, j: self.linear(st, y) as u16, stacked }
    }

    fn ext(&self, i: usize, l: usize, stacked: bool) -> Factor {
        Factor::Arc { i: i as u16, j: (self.n_r + l) as u16, stacked }
    }

    fn interval(&self, st: Strand, x: usize, y: usize) -> usize {
        self.iv_off[st as usize][x] + y + 1 - x
    }

    /// Number of cells allocated for a table.
    pub fn table_len(&self, t: Table) -> usize {
        match t.kind() {
            Kind::Interval(st) => self.iv_count[st as usize],
            Kind::Quad(st) => self.quad_count[st as usize],
            Kind::Region => self.iv_count[0] * self.iv_count[1],
        }
    }

    pub fn index(&self, c: Cell) -> usize {
        let (i, j, h, l) = (c.i as usize, c.j as usize, c.h as usize, c.l as usize);
        match c.table.kind() {
            Kind::Interval(st) => self.interval(st, i, j),
            Kind::Quad(st) => {
                let len = self.len(st);
                let s = l - i + 1;
                self.quad_off[st as usize][i * (len + 1) + l] + (j - i) * s + (h - i)
            }
            Kind::Region => {
                self.interval(Strand::R, i, j) * self.iv_count[1] + self.interval(Strand::S, h, l)
            }
        }
    }

    pub fn slot(t: Table) -> usize {
        t.slot()
    }

    pub fn root(&self) -> Cell {
        Cell::new(Table::I, 1, self.n_r, 1, self.n_s)
    }

    /// All cells, children before parents.
    pub fn fill_order(&self) -> Vec<Cell> {
        let mut order = Vec::new();
        for st in [Strand::R, Strand::S] {
            let len = self.len(st);
            let (sec, plus, pair) = strand_tables(st);
            for w in 0..=len {
                for x in 1..=len + 1 - w {
                    let y = x + w - 1;
                    for t in [pair, plus, sec] {
                        order.push(Cell::new(t, x, y, 0, 0));
                    }
                }
            }
            let (gstar, g, v) = gap_tables(st);
            for span in 2..=len {
                for a in 1..=len + 1 - span {
                    let p = a + span - 1;
                    for t in [gstar, g] {
                        for x1 in a..p {
                            for x2 in x1 + 1..=p {
                                order.push(Cell::new(t, a, x1, x2, p));
                            }
                        }
                    }
                    for u in a..p {
                        for v2 in u + 2..=p {
                            order.push(Cell::new(v, a, u, v2, p));
                        }
                    }
                }
            }
        }
        let intervals = |len: usize| {
            let mut out = Vec::new();
            for x in 1..=len + 1 {
                for y in x - 1..=len {
                    out.push((x, y));
                }
            }
            out
        };
        let mut regions = Vec::new();
        for &(i, j) in &intervals(self.n_r) {
            for &(h, l) in &intervals(self.n_s) {
                regions.push((j + 1 - i + l + 1 - h, i, j, h, l));
            }
        }
        regions.sort_unstable();
        for (_, i, j, h, l) in regions {
            for t in REGION_TABLES {
                order.push(Cell::new(t, i, j, h, l));
            }
        }
        order
    }

    /// Enumerates the productions of `c` as `(factor, children)`, in rule order.
    pub fn productions<F: FnMut(Factor, &[Cell])>(&self, c: Cell, f: &mut F) {
        use Table::*;
        let (i, j, h, l) = (c.i as usize, c.j as usize, c.h as usize, c.l as usize);
        match c.table {
            SecR => self.sec(Strand::R, i, j, true, f),
            SecS => self.sec(Strand::S, i, j, true, f),
            SecPlusR => self.sec(Strand::R, i, j, false, f),
            SecPlusS => self.sec(Strand::S, i, j, false, f),
            PairR => self.pair(Strand::R, i, j, f),
            PairS => self.pair(Strand::S, i, j, f),
            GStarR | GR => self.gap(Strand::R, i, j, h, l, f),
            GStarS | GS => self.gap(Strand::S, i, j, h, l, f),
            VR => self.v(Strand::R, i, j, h, l, f),
            VS => self.v(Strand::S, i, j, h, l, f),
            HyStar | Hy => self.hy(i, j, h, l, f),
            U => self.u(i, j, h, l, f),
            Hs => self.hs(i, j, h, l, f),
            W => self.w(i, j, h, l, f),
            X => self.x(i, j, h, l, f),
            Y => self.y(i, j, h, l, f),
            T => self.t(i, j, h, l, f),
            PtT => self.pt(Table::I, Table::T, i, j, h, l, f),
            PtHy => self.pt(Table::IPrime, Table::Hy, i, j, h, l, f),
            IPrime => self.i(true, i, j, h, l, f),
            I => self.i(false, i, j, h, l, f),
        }
    }

    // Secondary structures on [x, y]: x unpaired, or x paired with some m.
    fn sec<F: FnMut(Factor, &[Cell])>(&self, st: Strand, x: usize, y: usize, empty: bool, f: &mut F) {
        let (sec, plus, pair) = strand_tables(st);
        if y < x {
            if empty {
                f(Factor::One, &[]);
            }
            return;
        }
        let rest = if empty { sec } else { plus };
        f(Factor::One, &[Cell::new(rest, x + 1, y, 0, 0)]);
        for m in x + 1..=y {
            if self.can(st, x, m) {
                f(Factor::One, &[Cell::new(pair, x, m, 0, 0), Cell::new(sec, m + 1, y, 0, 0)]);
            }
        }
    }

    // Arc (x, m) over a hairpin, over an interior whose first base is
    // unpaired, over x+1 paired inside, or stacked on (x+1, m-1).
    fn pair<F: FnMut(Factor, &[Cell])>(&self, st: Strand, x: usize, m: usize, f: &mut F) {
        if m <= x || !self.can(st, x, m) {
            return;
        }
        let (sec, plus, pair) = strand_tables(st);
        let arc = self.arc(st, x, m, false);
        if m - x > self.theta {
            f(arc, &[]);
        }
        if x + 2 < m {
            f(arc, &[Cell::new(plus, x + 2, m - 1, 0, 0)]);
        }
        for k in x + 2..m.saturating_sub(1) {
            if self.can(st, x + 1, k) {
                f(arc, &[Cell::new(pair, x + 1, k, 0, 0), Cell::new(sec, k + 1, m - 1, 0, 0)]);
            }
        }
        if x + 2 < m && self.can(st, x + 1, m - 1) {
            f(self.arc(st, x, m, true), &[Cell::new(pair, x + 1, m - 1, 0, 0)]);
        }
    }

    // Gap structure with outer arc (a, p) and innermost arc (x1, x2).
    fn gap<F: FnMut(Factor, &[Cell])>(
        &self,
        st: Strand,
        a: usize,
        x1: usize,
        x2: usize,
        p: usize,
        f: &mut F,
    ) {
        if !self.can(st, a, p) || !self.can(st, x1, x2) {
            return;
        }
        if a == x1 && p == x2 {
            f(self.arc(st, a, p, false), &[]);
            return;
        }
        let (sec, _, _) = strand_tables(st);
        let (gstar, _, _) = gap_tables(st);
        for a2 in a + 1..=x1 {
            for p2 in x2..p {
                if self.can(st, a2, p2) {
                    f(
                        self.arc(st, a, p, a2 == a + 1 && p2 + 1 == p),
                        &[
                            Cell::new(sec, a + 1, a2 - 1, 0, 0),
                            Cell::new(sec, p2 + 1, p - 1, 0, 0),
                            Cell::new(gstar, a2, x1, x2, p2),
                        ],
                    );
                }
            }
        }
    }

    // Maximal gap structure padded on its inner side up to the gap [u+1, v-1].
    fn v<F: FnMut(Factor, &[Cell])>(&self, st: Strand, a: usize, u: usize, v: usize, p: usize, f: &mut F) {
        if !self.can(st, a, p) {
            return;
        }
        let (sec, _, _) = strand_tables(st);
        let (_, g, _) = gap_tables(st);
        for x1 in a..=u {
            for x2 in v..=p {
                if self.can(st, x1, x2) {
                    f(
                        Factor::One,
                        &[
                            Cell::new(g, a, x1, x2, p),
                            Cell::new(sec, x1 + 1, u, 0, 0),
                            Cell::new(sec, v, x2 - 1, 0, 0),
                        ],
                    );
                }
            }
        }
    }

    // Hybrid: nested exterior arcs separated by unpaired bases only.
    fn hy<F: FnMut(Factor, &[Cell])>(&self, i: usize, j: usize, h: usize, l: usize, f: &mut F) {
        if j < i || l < h || !self.can_ext(i, l) || !self.can_ext(j, h) {
            return;
        }
        if i == j && h == l {
            f(self.ext(i, l, false), &[]);
            return;
        }
        for i1 in i + 1..=j {
            for l1 in h..l {
                if self.can_ext(i1, l1) {
                    f(
                        self.ext(i, l, i1 == i + 1 && l1 + 1 == l),
                        &[Cell::new(Table::HyStar, i1, j, h, l1)],
                    );
                }
            }
        }
    }

    // Hybrid followed inward by padding that carries at least one arc.
    fn u<F: FnMut(Factor, &[Cell])>(&self, i: usize, u: usize, v: usize, l: usize, f: &mut F) {
        if u < i || l < v || !self.can_ext(i, l) {
            return;
        }
        for i1 in i..=u {
            for l1 in v..=l {
                if !self.can_ext(i1, l1) {
                    continue;
                }
                let hy = Cell::new(Table::Hy, i, i1, l1, l);
                if i1 < u {
                    f(
                        Factor::One,
                        &[
                            hy,
                            Cell::new(Table::SecPlusR, i1 + 1, u, 0, 0),
                            Cell::new(Table::SecS, v, l1 - 1, 0, 0),
                        ],
                    );
                }
                if v < l1 {
                    f(Factor::One, &[hy, Cell::new(Table::SecPlusS, v, l1 - 1, 0, 0)]);
                }
            }
        }
    }

    // Sequence of hybrids, all crossed by the same arcs.
    fn hs<F: FnMut(Factor, &[Cell])>(&self, i: usize, j: usize, h: usize, l: usize, f: &mut F) {
        if j < i || l < h || !self.can_ext(i, l) || !self.can_ext(j, h) {
            return;
        }
        f(Factor::One, &[Cell::new(Table::Hy, i, j, h, l)]);
        for u in i..j {
            for v in h + 1..=l {
                if self.can_ext(u + 1, v - 1) {
                    f(
                        Factor::One,
                        &[Cell::new(Table::U, i, u, v, l), Cell::new(Table::Hs, u + 1, j, h, v - 1)],
                    );
                }
            }
        }
    }

    // First arm of a crossing pair, padded toward the second arm.
    fn w<F: FnMut(Factor, &[Cell])>(&self, a: usize, u: usize, q: usize, v: usize, f: &mut F) {
        if u < a || v < q {
            return;
        }
        for x1 in a..=u {
            if !self.can_ext(x1, q) {
                continue;
            }
            for y2 in q..=v {
                if self.can_ext(a, y2) {
                    f(
                        Factor::One,
                        &[
                            Cell::new(Table::Hs, a, x1, q, y2),
                            Cell::new(Table::SecR, x1 + 1, u, 0, 0),
                            Cell::new(Table::SecS, y2 + 1, v, 0, 0),
                        ],
                    );
                }
            }
        }
    }

    // Two crossing hybrid sequences.
    fn x<F: FnMut(Factor, &[Cell])>(&self, a: usize, p: usize, q: usize, b: usize, f: &mut F) {
        if p <= a || b <= q {
            return;
        }
        for u in a..p {
            if !self.can_ext(u + 1, b) {
                continue;
            }
            for v in q..b {
                if self.can_ext(p, v + 1) {
                    f(
                        Factor::One,
                        &[Cell::new(Table::W, a, u, q, v), Cell::new(Table::Hs, u + 1, p, v + 1, b)],
                    );
                }
            }
        }
    }

    // R gap structure over a hybrid sequence or a crossing pair.
    fn y<F: FnMut(Factor, &[Cell])>(&self, a: usize, p: usize, q: usize, b: usize, f: &mut F) {
        if p < a + 2 || b < q || !self.can(Strand::R, a, p) {
            return;
        }
        for u in a..p {
            for v in u + 2..=p {
                let vr = Cell::new(Table::VR, a, u, v, p);
                f(Factor::One, &[vr, Cell::new(Table::Hs, u + 1, v - 1, q, b)]);
                f(Factor::One, &[vr, Cell::new(Table::X, u + 1, v - 1, q, b)]);
            }
        }
    }

    // Tight structure: the seven genus-zero two-backbone shadows.
    fn t<F: FnMut(Factor, &[Cell])>(&self, a: usize, p: usize, q: usize, b: usize, f: &mut F) {
        if p < a || b < q {
            return;
        }
        f(Factor::One, &[Cell::new(Table::X, a, p, q, b)]);
        f(Factor::One, &[Cell::new(Table::Y, a, p, q, b)]);
        if !self.can(Strand::S, q, b) {
            return;
        }
        for u in q..b {
            for v in u + 2..=b {
                let vs = Cell::new(Table::VS, q, u, v, b);
                for inner in [Table::Hs, Table::X, Table::Y] {
                    f(Factor::One, &[vs, Cell::new(inner, a, p, u + 1, v - 1)]);
                }
            }
        }
    }

    // Innermost block (i..p, q..l) together with everything around it.
    #[allow(clippy::too_many_arguments)]
    fn pt<F: FnMut(Factor, &[Cell])>(
        &self,
        outer: Table,
        block: Table,
        i: usize,
        p: usize,
        q: usize,
        l: usize,
        f: &mut F,
    ) {
        if p < i || l < q {
            return;
        }
        if block == Table::Hy && !self.can_ext(p, q) {
            return;
        }
        for a in i..=p {
            for b in q..=l {
                if block == Table::Hy && !self.can_ext(a, b) {
                    continue;
                }
                f(
                    Factor::One,
                    &[Cell::new(outer, i, a - 1, b + 1, l), Cell::new(block, a, p, q, b)],
                );
            }
        }
    }

    // Interaction structures on (i..j, h..l). The primed variant forbids an
    // innermost hybrid whose inner padding is arc-free, since it would merge
    // with the hybrid it encloses.
    fn i<F: FnMut(Factor, &[Cell])>(&self, primed: bool, i: usize, j: usize, h: usize, l: usize, f: &mut F) {
        f(Factor::One, &[Cell::new(Table::SecR, i, j, 0, 0), Cell::new(Table::SecS, h, l, 0, 0)]);
        for p in i..=j {
            for q in h..=l {
                let sec_r = Cell::new(Table::SecR, p + 1, j, 0, 0);
                let sec_s = Cell::new(Table::SecS, h, q - 1, 0, 0);
                let pthy = Cell::new(Table::PtHy, i, p, q, l);
                if !primed {
                    f(Factor::One, &[sec_r, sec_s, pthy]);
                } else {
                    if p < j {
                        f(Factor::One, &[Cell::new(Table::SecPlusR, p + 1, j, 0, 0), sec_s, pthy]);
                    }
                    if h < q {
                        f(Factor::One, &[Cell::new(Table::SecPlusS, h, q - 1, 0, 0), pthy]);
                    }
                }
                f(Factor::One, &[sec_r, sec_s, Cell::new(Table::PtT, i, p, q, l)]);
            }
        }
    }
}

fn strand_tables(st: Strand) -> (Table, Table, Table) {
    match st {
        Strand::R => (Table::SecR, Table::SecPlusR, Table::PairR),
        Strand::S => (Table::SecS, Table::SecPlusS, Table::PairS),
    }
}

fn gap_tables(st: Strand) -> (Table, Table, Table) {
    match st {
        Strand::R => (Table::GStarR, Table::GR, Table::VR),
        Strand::S => (Table::GStarS, Table::GS, Table::VS),
    }
}
