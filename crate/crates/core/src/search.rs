//! Exhaustive witness search: find `A` with `1 <= R_A(n) <= r` for all `n`,
//! or certify that the normalized space contains none.
//!
//! The tree is depth-first over pool elements in ascending order with three
//! pruning rules: the cardinality window from the size lemmas, abandoning a
//! branch once some representation count exceeds `r`, and abandoning once
//! some residue can no longer receive any representation from the elements
//! still available. The tree is split at a fixed depth into independent
//! subtree tasks; results are combined in task order, so node counts and the
//! first witness are identical across thread counts.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bounds::k_range;
use crate::error::{Error, Result};
use crate::symmetry::{search_normalization, Normalization, SearchCase};
use crate::zm::{verify_witness, Modulus, ResidueSet};

pub const CHECKPOINT_VERSION: u32 = 1;
pub const DEFAULT_SPLIT_DEPTH: usize = 12;

/// One search job: modulus, representation cap, cardinality window,
/// normalization.
#[derive(Debug, Clone)]
pub struct SearchTask {
    pub m: u64,
    pub r: u32,
    pub k_lo: u64,
    pub k_hi: u64,
    pub normalization: Normalization,
}

impl SearchTask {
    /// Window defaults to the full admissible range for `(m, r)`.
    pub fn new(m: u64, r: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::ModulusTooSmall { m, min: 1 });
        }
        let (lo, hi) = k_range(m, r as u64);
        Ok(SearchTask {
            m,
            r,
            k_lo: lo,
            k_hi: hi,
            normalization: search_normalization(m),
        })
    }

    /// Restricts the cardinality window; it is clamped into the admissible
    /// range, since no witness can live outside it.
    pub fn with_k_range(m: u64, r: u32, k_lo: u64, k_hi: u64) -> Result<Self> {
        if k_lo > k_hi || k_hi > m {
            return Err(Error::InvalidKRange {
                lo: k_lo,
                hi: k_hi,
                m,
            });
        }
        let mut task = Self::new(m, r)?;
        task.k_lo = task.k_lo.max(k_lo);
        task.k_hi = task.k_hi.min(k_hi);
        Ok(task)
    }
}

/// Runtime knobs; none of them may change any result, only speed.
#[derive(Debug, Clone)]
pub struct SearchOpts {
    pub threads: usize,
    pub time_budget: Option<Duration>,
    pub split_depth: usize,
    /// Emit `{"nodes":..,"depth_histogram":..,"elapsed_s":..}` lines on
    /// stderr at this interval.
    pub progress_interval: Option<Duration>,
}

impl Default for SearchOpts {
    fn default() -> Self {
        SearchOpts {
            threads: 1,
            time_budget: None,
            split_depth: DEFAULT_SPLIT_DEPTH,
            progress_interval: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Found(ResidueSet),
    Exhausted,
    Timeout(Box<Checkpoint>),
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

/// A resumable snapshot: completed work plus the frontier of pending
/// subtree prefixes for the unit in progress.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub m: u64,
    pub r: u32,
    pub k_lo: u64,
    pub k_hi: u64,
    pub split_depth: usize,
    pub normalization_hash: String,
    /// Node totals of fully completed `(k, case)` units, in order.
    pub completed_unit_nodes: Vec<u64>,
    /// Index of the unit in progress.
    pub current_unit: usize,
    /// Nodes spent splitting the current unit into tasks.
    pub split_nodes: u64,
    pub tasks: Vec<CheckpointTask>,
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointTask {
    /// Pool elements included by the prefix.
    pub included: Vec<u64>,
    /// Next undecided pool index.
    pub position: usize,
    /// `Some(nodes)` once the subtree has been fully traversed.
    pub nodes: Option<u64>,
    pub witness: Option<Vec<u64>>,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        let mut cp = self.clone();
        cp.checksum = String::new();
        let body = serde_json::to_string(&cp).expect("checkpoint serializes");
        cp.checksum = sha256_hex(body.as_bytes());
        serde_json::to_string_pretty(&cp).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cp: Checkpoint = serde_json::from_str(text)
            .map_err(|e| Error::Checkpoint(format!("unreadable token: {e}")))?;
        if cp.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "version mismatch: token {} vs build {CHECKPOINT_VERSION}",
                cp.version
            )));
        }
        let mut body = cp.clone();
        body.checksum = String::new();
        let expect = sha256_hex(serde_json::to_string(&body).expect("serializes").as_bytes());
        if expect != cp.checksum {
            return Err(Error::Checkpoint("integrity check failed".to_string()));
        }
        Ok(cp)
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn normalization_hash(n: &Normalization, split_depth: usize) -> String {
    let body = serde_json::to_string(&(n, split_depth)).expect("serializes");
    sha256_hex(body.as_bytes())
}

/// One `(k, case)` slice of the search space.
#[derive(Debug, Clone)]
struct Unit {
    k: u64,
    case: SearchCase,
}

fn build_units(task: &SearchTask) -> Vec<Unit> {
    let mut units = Vec::new();
    for k in task.k_lo..=task.k_hi.min(task.m) {
        for case in &task.normalization.cases {
            units.push(Unit {
                k,
                case: case.clone(),
            });
        }
    }
    units
}

/// Searches the normalized space. `Found` carries the first witness in
/// deterministic order; `Exhausted` certifies the whole space was covered.
pub fn find_basis(task: &SearchTask, opts: &SearchOpts) -> Result<SearchOutcome> {
    run_search(task, opts, None)
}

/// Continues a `Timeout` checkpoint. The union of work before and after
/// covers the space exactly once; aborted subtrees are redone from scratch.
pub fn resume(cp: &Checkpoint, opts: &SearchOpts) -> Result<SearchOutcome> {
    let task = SearchTask::with_k_range(cp.m, cp.r, cp.k_lo, cp.k_hi)?;
    let expect = normalization_hash(&task.normalization, cp.split_depth);
    if expect != cp.normalization_hash {
        return Err(Error::Checkpoint(
            "normalization mismatch with this build".to_string(),
        ));
    }
    let units = build_units(&task);
    if cp.current_unit >= units.len() && cp.tasks.is_empty() {
        return Err(Error::Checkpoint("nothing to resume".to_string()));
    }
    let mut opts = opts.clone();
    opts.split_depth = cp.split_depth;
    run_search(&task, &opts, Some(cp.clone()))
}

fn run_search(
    task: &SearchTask,
    opts: &SearchOpts,
    from: Option<Checkpoint>,
) -> Result<SearchOutcome> {
    let started = Instant::now();
    let deadline = opts.time_budget.map(|b| started + b);
    let units = build_units(task);
    let norm_hash = normalization_hash(&task.normalization, opts.split_depth);

    let mut completed_unit_nodes: Vec<u64> = Vec::new();
    let mut start_unit = 0usize;
    let mut carried_tasks: Option<(u64, Vec<CheckpointTask>)> = None;
    if let Some(cp) = from {
        completed_unit_nodes = cp.completed_unit_nodes.clone();
        start_unit = cp.current_unit;
        if !cp.tasks.is_empty() {
            carried_tasks = Some((cp.split_nodes, cp.tasks));
        }
    }

    let progress = ProgressSink::new(opts.progress_interval, started);

    for (u, unit) in units.iter().enumerate().skip(start_unit) {
        let mut frame = match carried_tasks.take() {
            Some((split_nodes, tasks)) if u == start_unit => UnitFrame { split_nodes, tasks },
            _ => split_unit(task, unit, opts.split_depth),
        };
        process_unit(task, unit, &mut frame, opts, deadline, &progress);

        // combine in task order
        let found = frame
            .tasks
            .iter()
            .enumerate()
            .find(|(_, t)| t.witness.is_some());
        if let Some((ti, hit)) = found {
            let prefix_done = frame.tasks[..ti].iter().all(|t| t.nodes.is_some());
            if prefix_done {
                let nodes = completed_unit_nodes.iter().sum::<u64>()
                    + frame.split_nodes
                    + frame.tasks[..=ti]
                        .iter()
                        .filter_map(|t| t.nodes)
                        .sum::<u64>();
                let witness = ResidueSet::from_members(task.m, hit.witness.as_ref().unwrap())?;
                debug_assert!(verify_witness(Modulus::new(task.m)?, &witness, task.r)?);
                return Ok(SearchOutcome {
                    verdict: Verdict::Found(witness),
                    nodes_explored: nodes,
                    wall_time: started.elapsed(),
                });
            }
        }
        if frame.tasks.iter().all(|t| t.nodes.is_some()) && found.is_none() {
            completed_unit_nodes
                .push(frame.split_nodes + frame.tasks.iter().filter_map(|t| t.nodes).sum::<u64>());
            continue;
        }
        // timed out mid-unit
        let mut cp = Checkpoint {
            version: CHECKPOINT_VERSION,
            m: task.m,
            r: task.r,
            k_lo: task.k_lo,
            k_hi: task.k_hi,
            split_depth: opts.split_depth,
            normalization_hash: norm_hash,
            completed_unit_nodes,
            current_unit: u,
            split_nodes: frame.split_nodes,
            tasks: frame.tasks,
            checksum: String::new(),
        };
        cp.checksum = sha256_hex(
            serde_json::to_string(&{
                let mut c = cp.clone();
                c.checksum = String::new();
                c
            })
            .expect("serializes")
            .as_bytes(),
        );
        return Ok(SearchOutcome {
            verdict: Verdict::Timeout(Box::new(cp)),
            nodes_explored: 0,
            wall_time: started.elapsed(),
        });
    }

    Ok(SearchOutcome {
        verdict: Verdict::Exhausted,
        nodes_explored: completed_unit_nodes.iter().sum(),
        wall_time: started.elapsed(),
    })
}

struct UnitFrame {
    split_nodes: u64,
    tasks: Vec<CheckpointTask>,
}

/// Incremental DFS state over one unit.
struct Dfs {
    m: u64,
    r: u32,
    k: u64,
    pool: Vec<u64>,
    members: Vec<u64>,
    /// Representation counts of the current partial set.
    counts: Vec<u32>,
    /// Ordered pairs from still-available elements that could land on each
    /// residue; a zero entry means that residue is unreachable.
    potential: Vec<u64>,
    dead_residues: u64,
    /// Elements still available (current members plus undecided pool tail).
    available: Vec<u64>,
    in_avail: Vec<bool>,
    nodes: u64,
    check_counter: u32,
}

enum DfsResult {
    Done,
    Found(Vec<u64>),
    Aborted,
}

impl Dfs {
    /// Builds the root state with the required elements already included.
    /// Returns `None` when the required elements alone violate the cap.
    fn new(m: u64, r: u32, k: u64, case: &SearchCase) -> Option<Dfs> {
        let mut dfs = Dfs {
            m,
            r,
            k,
            pool: case.pool.clone(),
            members: Vec::new(),
            counts: vec![0; m as usize],
            potential: vec![0; m as usize],
            dead_residues: 0,
            available: Vec::new(),
            in_avail: vec![false; m as usize],
            nodes: 0,
            check_counter: 0,
        };
        if (case.required.len() as u64) > k {
            return None; // normalized space empty at this cardinality
        }
        for &a in case.required.iter().chain(case.pool.iter()) {
            dfs.available.push(a);
            dfs.in_avail[a as usize] = true;
        }
        for i in 0..dfs.available.len() {
            for j in 0..dfs.available.len() {
                let n = ((dfs.available[i] + dfs.available[j]) % m) as usize;
                dfs.potential[n] += 1;
            }
        }
        for n in 0..m as usize {
            if dfs.potential[n] == 0 {
                dfs.dead_residues += 1;
            }
        }
        for &a in &case.required {
            if !dfs.include(a) {
                return None;
            }
        }
        Some(dfs)
    }

    /// Adds `a` to the partial set; fails (and undoes) if some count
    /// exceeds the cap.
    fn include(&mut self, a: u64) -> bool {
        let m = self.m;
        let mut ok = true;
        for &b in &self.members {
            let n = ((a + b) % m) as usize;
            self.counts[n] += 2;
            if self.counts[n] > self.r {
                ok = false;
            }
        }
        let n2 = ((2 * a) % m) as usize;
        self.counts[n2] += 1;
        if self.counts[n2] > self.r {
            ok = false;
        }
        self.members.push(a);
        if !ok {
            self.unclude(a);
            return false;
        }
        true
    }

    fn unclude(&mut self, a: u64) {
        let m = self.m;
        self.members.pop();
        for &b in &self.members {
            let n = ((a + b) % m) as usize;
            self.counts[n] -= 2;
        }
        self.counts[((2 * a) % m) as usize] -= 1;
    }

    /// Removes `a` from the available set, updating reachability.
    fn drop_available(&mut self, a: u64) {
        let m = self.m;
        self.in_avail[a as usize] = false;
        // a no longer pairs with anything still available (nor with itself)
        let idx = self
            .available
            .iter()
            .rposition(|&x| x == a)
            .expect("available");
        self.available.swap_remove(idx);
        for i in 0..self.available.len() {
            let n = ((a + self.available[i]) % m) as usize;
            self.potential[n] -= 2;
            if self.potential[n] == 0 {
                self.dead_residues += 1;
            }
        }
        let n2 = ((2 * a) % m) as usize;
        self.potential[n2] -= 1;
        if self.potential[n2] == 0 {
            self.dead_residues += 1;
        }
    }

    fn restore_available(&mut self, a: u64) {
        let m = self.m;
        for i in 0..self.available.len() {
            let n = ((a + self.available[i]) % m) as usize;
            if self.potential[n] == 0 {
                self.dead_residues -= 1;
            }
            self.potential[n] += 2;
        }
        let n2 = ((2 * a) % m) as usize;
        if self.potential[n2] == 0 {
            self.dead_residues -= 1;
        }
        self.potential[n2] += 1;
        self.available.push(a);
        self.in_avail[a as usize] = true;
    }

    /// Full DFS from pool position `pos` with `depth` decisions made.
    /// `split_at`/`sink`: emit subtree tasks instead of descending past the
    /// split depth.
    #[allow(clippy::too_many_arguments)]
    fn visit(
        &mut self,
        pos: usize,
        depth: usize,
        split_at: Option<usize>,
        sink: &mut Vec<CheckpointTask>,
        deadline: Option<Instant>,
        abort: &AtomicBool,
        approx_nodes: &AtomicU64,
    ) -> DfsResult {
        if let Some(d) = split_at {
            if depth == d && (self.members.len() as u64) < self.k && pos < self.pool.len() {
                sink.push(CheckpointTask {
                    included: self.members.clone(),
                    position: pos,
                    nodes: None,
                    witness: None,
                });
                return DfsResult::Done;
            }
        }
        self.nodes += 1;
        self.check_counter += 1;
        if self.check_counter >= 4096 {
            self.check_counter = 0;
            approx_nodes.fetch_add(4096, Ordering::Relaxed);
            if abort.load(Ordering::Relaxed) {
                return DfsResult::Aborted;
            }
            if let Some(dl) = deadline {
                if Instant::now() > dl {
                    return DfsResult::Aborted;
                }
            }
        }

        if self.dead_residues > 0 {
            return DfsResult::Done;
        }
        let have = self.members.len() as u64;
        if have == self.k {
            if self.counts.iter().all(|&c| c >= 1) {
                let mut w = self.members.clone();
                w.sort();
                return DfsResult::Found(w);
            }
            return DfsResult::Done;
        }
        let undecided = (self.pool.len() - pos) as u64;
        if have + undecided < self.k {
            return DfsResult::Done;
        }
        if pos == self.pool.len() {
            return DfsResult::Done;
        }
        let a = self.pool[pos];

        // include-first gives witnesses in ascending lexicographic order
        if self.include(a) {
            match self.visit(
                pos + 1,
                depth + 1,
                split_at,
                sink,
                deadline,
                abort,
                approx_nodes,
            ) {
                DfsResult::Done => {}
                other => {
                    self.unclude(a);
                    return other;
                }
            }
            self.unclude(a);
        }

        self.drop_available(a);
        let out = self.visit(
            pos + 1,
            depth + 1,
            split_at,
            sink,
            deadline,
            abort,
            approx_nodes,
        );
        self.restore_available(a);
        out
    }

    /// Replays a task prefix: everything before `position` is included if
    /// listed, excluded otherwise. Returns false if the prefix is
    /// inconsistent with this build.
    fn replay(&mut self, task: &CheckpointTask) -> bool {
        let required_len = self.members.len();
        for pos in 0..task.position {
            let a = self.pool[pos];
            if task.included.len() > required_len && task.included[required_len..].contains(&a)
                || task.included[..required_len.min(task.included.len())].contains(&a)
            {
                if !self.include(a) {
                    return false;
                }
            } else {
                self.drop_available(a);
            }
        }
        true
    }
}

fn split_unit(task: &SearchTask, unit: &Unit, split_depth: usize) -> UnitFrame {
    let mut tasks = Vec::new();
    let abort = AtomicBool::new(false);
    let approx = AtomicU64::new(0);
    let Some(mut dfs) = Dfs::new(task.m, task.r, unit.k, &unit.case) else {
        return UnitFrame {
            split_nodes: 0,
            tasks,
        };
    };
    match dfs.visit(0, 0, Some(split_depth), &mut tasks, None, &abort, &approx) {
        DfsResult::Found(w) => {
            // a witness shallower than the split depth: record it as a
            // completed pseudo-task at its DFS position
            tasks.push(CheckpointTask {
                included: Vec::new(),
                position: 0,
                nodes: Some(0),
                witness: Some(w),
            });
        }
        DfsResult::Done => {}
        DfsResult::Aborted => unreachable!("split phase has no deadline"),
    }
    UnitFrame {
        split_nodes: dfs.nodes,
        tasks,
    }
}

fn process_unit(
    task: &SearchTask,
    unit: &Unit,
    frame: &mut UnitFrame,
    opts: &SearchOpts,
    deadline: Option<Instant>,
    progress: &ProgressSink,
) {
    let n_tasks = frame.tasks.len();
    if n_tasks == 0 {
        return;
    }
    let next = AtomicUsize::new(0);
    let min_found = AtomicUsize::new(usize::MAX);
    let abort = AtomicBool::new(false);
    // per task: node count plus the witness members, if one was found
    type TaskResult = Option<(u64, Option<Vec<u64>>)>;
    let results: Mutex<Vec<TaskResult>> = Mutex::new(vec![None; n_tasks]);
    let threads = opts.threads.max(1);

    std::thread::scope(|s| {
        for _ in 0..threads {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n_tasks {
                    break;
                }
                let entry = {
                    let guard = frame.tasks.get(i).expect("task index");
                    guard.clone()
                };
                if let Some(nodes) = entry.nodes {
                    // already done in a previous run
                    let mut res = results.lock().unwrap();
                    res[i] = Some((nodes, entry.witness.clone()));
                    continue;
                }
                if min_found.load(Ordering::SeqCst) < i {
                    continue; // an earlier witness already decides the unit
                }
                if let Some(dl) = deadline {
                    if Instant::now() > dl {
                        abort.store(true, Ordering::SeqCst);
                    }
                }
                if abort.load(Ordering::SeqCst) && min_found.load(Ordering::SeqCst) == usize::MAX {
                    continue;
                }
                let Some(mut dfs) = Dfs::new(task.m, task.r, unit.k, &unit.case) else {
                    let mut res = results.lock().unwrap();
                    res[i] = Some((0, None));
                    continue;
                };
                if !dfs.replay(&entry) {
                    let mut res = results.lock().unwrap();
                    res[i] = Some((0, None));
                    continue;
                }
                dfs.nodes = 0; // replay is bookkeeping, not exploration
                let mut sink = Vec::new();
                match dfs.visit(
                    entry.position,
                    opts.split_depth,
                    None,
                    &mut sink,
                    deadline,
                    &abort,
                    progress.nodes(),
                ) {
                    DfsResult::Done => {
                        let mut res = results.lock().unwrap();
                        res[i] = Some((dfs.nodes, None));
                    }
                    DfsResult::Found(w) => {
                        min_found.fetch_min(i, Ordering::SeqCst);
                        let mut res = results.lock().unwrap();
                        res[i] = Some((dfs.nodes, Some(w)));
                    }
                    DfsResult::Aborted => {
                        // partial counts are discarded; the task stays pending
                    }
                }
                progress.maybe_emit();
            });
        }
    });

    let results = results.into_inner().unwrap();
    for (t, r) in frame.tasks.iter_mut().zip(results) {
        if let Some((nodes, witness)) = r {
            t.nodes = Some(nodes);
            if witness.is_some() {
                t.witness = witness;
            }
        }
    }
}

struct ProgressSink {
    interval: Option<Duration>,
    started: Instant,
    nodes: AtomicU64,
    last: Mutex<Instant>,
}

impl ProgressSink {
    fn new(interval: Option<Duration>, started: Instant) -> Self {
        ProgressSink {
            interval,
            started,
            nodes: AtomicU64::new(0),
            last: Mutex::new(started),
        }
    }

    fn nodes(&self) -> &AtomicU64 {
        &self.nodes
    }

    fn maybe_emit(&self) {
        let Some(interval) = self.interval else {
            return;
        };
        let mut last = self.last.lock().unwrap();
        if last.elapsed() >= interval {
            *last = Instant::now();
            let line = serde_json::json!({
                "nodes": self.nodes.load(Ordering::Relaxed),
                "depth_histogram": Vec::<u64>::new(),
                "elapsed_s": self.started.elapsed().as_secs_f64(),
            });
            eprintln!("{line}");
        }
    }
}

/// Outcome of a Ruzsa-number computation.
#[derive(Debug, Clone)]
pub enum RuzsaOutcome {
    Determined {
        r: u32,
        witness: ResidueSet,
        nodes: u64,
    },
    Timeout {
        r: u32,
        checkpoint: Box<Checkpoint>,
        nodes: u64,
    },
}

/// Least `r` up to `r_ceiling` admitting a witness, with that witness.
pub fn ruzsa_number(m: u64, r_ceiling: u32, opts: &SearchOpts) -> Result<RuzsaOutcome> {
    let mut nodes = 0u64;
    for r in 1..=r_ceiling {
        let task = SearchTask::new(m, r)?;
        let outcome = find_basis(&task, opts)?;
        nodes += outcome.nodes_explored;
        match outcome.verdict {
            Verdict::Found(witness) => return Ok(RuzsaOutcome::Determined { r, witness, nodes }),
            Verdict::Exhausted => continue,
            Verdict::Timeout(cp) => {
                return Ok(RuzsaOutcome::Timeout {
                    r,
                    checkpoint: cp,
                    nodes,
                })
            }
        }
    }
    Err(Error::CeilingExhausted(r_ceiling))
}

pub const DEFAULT_R_CEILING: u32 = 288;

/// Independent oracle: enumerates every subset containing 0, no pruning.
/// Returns the least attainable representation cap and the first witness
/// attaining it in mask order.
pub fn brute_force_ruzsa(m: u64) -> Result<(u32, ResidueSet)> {
    if m > 16 {
        return Err(Error::ModulusTooLarge { m, max: 16 });
    }
    if m == 0 {
        return Err(Error::ModulusTooSmall { m, min: 1 });
    }
    let mut best: Option<(u32, ResidueSet)> = None;
    for mask in 0u32..(1 << (m - 1)) {
        let members: Vec<u64> = std::iter::once(0)
            .chain((1..m).filter(|&a| mask >> (a - 1) & 1 == 1))
            .collect();
        let set = ResidueSet::from_members(m, &members)?;
        let rv = crate::zm::rep_function(&set);
        if rv.counts.contains(&0) {
            continue;
        }
        let max = rv.max() as u32;
        if best.as_ref().is_none_or(|(b, _)| max < *b) {
            best = Some((max, set));
        }
    }
    best.ok_or_else(|| Error::InvalidParams(format!("no basis found for m = {m}")))
}
