use std::fmt;
use std::ops::ControlFlow;

/// Whether the first and last factors of a simplified form are affine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EndShape {
    pub start_affine: bool,
    pub end_affine: bool,
}

impl EndShape {
    pub const ALL: [EndShape; 4] = [
        EndShape { start_affine: true, end_affine: true },
        EndShape { start_affine: true, end_affine: false },
        EndShape { start_affine: false, end_affine: true },
        EndShape { start_affine: false, end_affine: false },
    ];
}

/// Degrees `d_{-1}, d_0, ..., d_n` along a simplified form
/// `rho_n tau ... tau rho_0`, where `d_j` is the degree after `rho_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegreeSequence {
    pub values: Vec<usize>,
    pub valley: usize,
    pub shape: EndShape,
}

impl DegreeSequence {
    /// Number of `tau` factors.
    pub fn n(&self) -> usize {
        self.values.len() - 2
    }

    /// `d_j` for `j >= -1`.
    pub fn d(&self, j: isize) -> usize {
        self.values[(j + 1) as usize]
    }

    pub fn start(&self) -> usize {
        self.values[0]
    }

    pub fn end(&self) -> usize {
        *self.values.last().unwrap()
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.values.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "({}) valley {} ends {}{}",
            v.join(","),
            self.valley,
            if self.shape.start_affine { 'A' } else { 'T' },
            if self.shape.end_affine { 'A' } else { 'T' }
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Down,
    Up,
}

/// Step from `prev` to `next` at position `i` of `n + 1` steps; `None` if
/// the valley shape forbids it.
fn step(phase: Phase, i: usize, n: usize, prev: usize, next: usize, shape: EndShape) -> Option<Phase> {
    let forced_start = i == 0 && shape.start_affine;
    let forced_end = i == n && shape.end_affine;
    if forced_start || forced_end {
        return (prev == next).then_some(phase);
    }
    match phase {
        Phase::Down if next < prev => Some(Phase::Down),
        Phase::Down => Some(Phase::Up),
        Phase::Up if next > prev => Some(Phase::Up),
        Phase::Up => None,
    }
}

fn valley_of(values: &[usize]) -> usize {
    let inner = &values[1..values.len() - 1];
    if inner.is_empty() {
        return 0;
    }
    let min = *inner.iter().min().unwrap();
    inner.iter().position(|&d| d == min).unwrap()
}

/// Calls `f` on every valley sequence with `n` tau factors, in
/// lexicographic order of the interior degrees.
pub fn for_each_sequence<B>(
    start: usize,
    end: usize,
    n: usize,
    shape: EndShape,
    f: &mut dyn FnMut(DegreeSequence) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if n == 0 && shape.start_affine != shape.end_affine {
        return ControlFlow::Continue(());
    }
    let top = start.max(end);
    let mut values = vec![start];
    rec(&mut values, Phase::Down, n, end, top, shape, f)
}

fn rec<B>(
    values: &mut Vec<usize>,
    phase: Phase,
    n: usize,
    end: usize,
    top: usize,
    shape: EndShape,
    f: &mut dyn FnMut(DegreeSequence) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let i = values.len() - 1;
    let prev = *values.last().unwrap();
    if i == n {
        if step(phase, i, n, prev, end, shape).is_some() {
            values.push(end);
            let seq = DegreeSequence { values: values.clone(), valley: valley_of(values), shape };
            values.pop();
            return f(seq);
        }
        return ControlFlow::Continue(());
    }
    for next in 1..=top {
        if let Some(ph) = step(phase, i, n, prev, next, shape) {
            values.push(next);
            let r = rec(values, ph, n, end, top, shape, f);
            values.pop();
            r?;
        }
    }
    ControlFlow::Continue(())
}

/// All valley sequences from `start` to `end` for one end shape, ordered by
/// length and then lexicographically.
pub fn enumerate_sequences(start: usize, end: usize, shape: EndShape) -> Vec<DegreeSequence> {
    let mut out = Vec::new();
    for n in 0..=start + end {
        let _ = for_each_sequence::<()>(start, end, n, shape, &mut |s| {
            out.push(s);
            ControlFlow::Continue(())
        });
    }
    out
}
