use num_complex::Complex64;

/// Uniform bucket grid over axis-aligned boxes, used for proximity queries.
#[derive(Debug, Clone)]
pub(crate) struct BucketGrid {
    x0: f64,
    y0: f64,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<u32>>,
}

impl BucketGrid {
    pub fn new(lo: Complex64, hi: Complex64, cell: f64) -> Self {
        let w = (hi.re - lo.re).max(cell);
        let h = (hi.im - lo.im).max(cell);
        // keep the bucket count bounded for degenerate cell sizes
        let mut cell = cell.max(1e-300);
        while (w / cell) * (h / cell) > 4.0e6 {
            cell *= 2.0;
        }
        let nx = (w / cell).ceil() as usize + 1;
        let ny = (h / cell).ceil() as usize + 1;
        BucketGrid {
            x0: lo.re,
            y0: lo.im,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        }
    }

    fn ix(&self, x: f64) -> usize {
        (((x - self.x0) / self.cell).floor().max(0.0) as usize).min(self.nx - 1)
    }

    fn iy(&self, y: f64) -> usize {
        (((y - self.y0) / self.cell).floor().max(0.0) as usize).min(self.ny - 1)
    }

    pub fn insert(&mut self, id: usize, lo: Complex64, hi: Complex64) {
        for j in self.iy(lo.im)..=self.iy(hi.im) {
            for i in self.ix(lo.re)..=self.ix(hi.re) {
                self.buckets[j * self.nx + i].push(id as u32);
            }
        }
    }

    pub fn insert_point(&mut self, id: usize, p: Complex64) {
        self.insert(id, p, p);
    }

    /// Visit ids whose boxes may intersect the disk `|z − p| ≤ r`.
    /// Ids can be visited more than once.
    pub fn visit(&self, p: Complex64, r: f64, mut f: impl FnMut(usize)) {
        for j in self.iy(p.im - r)..=self.iy(p.im + r) {
            for i in self.ix(p.re - r)..=self.ix(p.re + r) {
                for &id in &self.buckets[j * self.nx + i] {
                    f(id as usize);
                }
            }
        }
    }
}

/// Even-odd point-in-polygon test against a set of closed polygon edges,
/// accelerated with horizontal strips.
#[derive(Debug, Clone)]
pub(crate) struct StripIndex {
    y0: f64,
    dy: f64,
    strips: Vec<Vec<u32>>,
    edges: Vec<(Complex64, Complex64)>,
}

impl StripIndex {
    pub fn new(edges: Vec<(Complex64, Complex64)>) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (a, b) in &edges {
            lo = lo.min(a.im.min(b.im));
            hi = hi.max(a.im.max(b.im));
        }
        let k = ((edges.len() as f64).sqrt() * 2.0).ceil().max(1.0) as usize;
        let dy = ((hi - lo) / k as f64).max(1e-300);
        let mut strips = vec![Vec::new(); k];
        for (id, (a, b)) in edges.iter().enumerate() {
            let s0 = (((a.im.min(b.im) - lo) / dy).floor().max(0.0) as usize).min(k - 1);
            let s1 = (((a.im.max(b.im) - lo) / dy).floor().max(0.0) as usize).min(k - 1);
            for s in strips.iter_mut().take(s1 + 1).skip(s0) {
                s.push(id as u32);
            }
        }
        StripIndex {
            y0: lo,
            dy,
            strips,
            edges,
        }
    }

    pub fn inside(&self, p: Complex64) -> bool {
        let k = self.strips.len();
        let s = ((p.im - self.y0) / self.dy).floor();
        if s < 0.0 || s >= k as f64 + 1.0 {
            return false;
        }
        let s = (s as usize).min(k - 1);
        let mut inside = false;
        for &id in &self.strips[s] {
            let (a, b) = self.edges[id as usize];
            if (a.im > p.im) != (b.im > p.im) {
                let x = a.re + (p.im - a.im) / (b.im - a.im) * (b.re - a.re);
                if x > p.re {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

pub(crate) fn segment_distance(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let l2 = d.norm_sqr();
    if l2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / l2).clamp(0.0, 1.0);
    (a + d * t - p).norm()
}
