//! Line-oriented text formats.
//!
//! ```text
//! sd-instance v1          sd-schedule v1     3partition v1    triplets v1
//! # comment               order 2 1 3        q 2 B 16         t 1 2 3
//! n 3 v 2                                    x 5 5 6 6 5 5    t 4 5 6
//! p 2 1 1
//! pref 1 1 2 3
//! pref 2 3 2 1
//! roles 1 int:1           (optional, reduced instances only)
//! ```
//!
//! Writers emit exactly this layout with single spaces and a trailing
//! newline. Readers accept `#` comment lines and blank lines anywhere after
//! the header.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{validate_instance, Instance, Schedule, TaskId};
use crate::reductions::{
    Breakdown, Constants, ReducedInstance, Role, ThreePartitionInstance, TripletPartition,
};

pub const INSTANCE_HEADER: &str = "sd-instance v1";
pub const SCHEDULE_HEADER: &str = "sd-schedule v1";
pub const THREE_PARTITION_HEADER: &str = "3partition v1";
pub const PARTITION_HEADER: &str = "triplets v1";

/// An instance file: the instance plus its comments and optional roles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceDoc {
    pub instance: Instance,
    /// Comment text without the leading `# `.
    pub comments: Vec<String>,
    pub roles: Vec<(TaskId, Role)>,
}

impl InstanceDoc {
    pub fn new(instance: Instance) -> Self {
        InstanceDoc {
            instance,
            comments: Vec::new(),
            roles: Vec::new(),
        }
    }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.tokens[0].1
    }

    fn err(&self, token: usize, message: impl Into<String>) -> Error {
        let column = self
            .tokens
            .get(token)
            .or(self.tokens.last())
            .map_or(1, |t| t.0);
        Error::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }

    fn expect_len(&self, len: usize) -> Result<()> {
        if self.tokens.len() != len {
            let at = self.tokens.len().min(len);
            return Err(self.err(
                at,
                format!(
                    "`{}` line needs {} fields, found {}",
                    self.keyword(),
                    len - 1,
                    self.tokens.len() - 1
                ),
            ));
        }
        Ok(())
    }

    fn expect_keyword(&self, kw: &str) -> Result<()> {
        if self.keyword() != kw {
            return Err(self.err(0, format!("expected `{kw}`, found `{}`", self.keyword())));
        }
        Ok(())
    }

    fn num<T: FromStr>(&self, token: usize) -> Result<T> {
        let (_, text) = self.tokens[token];
        text.parse()
            .map_err(|_| self.err(token, format!("`{text}` is not a valid number here")))
    }

    fn nums<T: FromStr>(&self, from: usize) -> Result<Vec<T>> {
        (from..self.tokens.len()).map(|i| self.num(i)).collect()
    }
}

struct Reader<'a> {
    lines: Vec<Line<'a>>,
    comments: Vec<String>,
    next: usize,
    last_line: usize,
}

impl<'a> Reader<'a> {
    fn new(text: &'a str, header: &str) -> Result<Self> {
        let mut raw = text.lines().enumerate();
        let first = raw.next().map(|(_, l)| l.trim_end()).unwrap_or("");
        if first != header {
            let kind = header.split(' ').next().unwrap_or(header);
            if first.split_whitespace().next() == Some(kind) {
                return Err(Error::Version {
                    expected: header.to_string(),
                    found: first.to_string(),
                });
            }
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected header `{header}`"),
            });
        }
        let mut lines = Vec::new();
        let mut comments = Vec::new();
        let mut last_line = 1;
        for (i, l) in raw {
            last_line = i + 1;
            let trimmed = l.trim_start();
            if let Some(c) = trimmed.strip_prefix('#') {
                comments.push(c.strip_prefix(' ').unwrap_or(c).trim_end().to_string());
                continue;
            }
            let tokens: Vec<(usize, &str)> = l
                .split_whitespace()
                .map(|tok| (tok.as_ptr() as usize - l.as_ptr() as usize + 1, tok))
                .collect();
            if !tokens.is_empty() {
                lines.push(Line {
                    number: i + 1,
                    tokens,
                });
            }
        }
        Ok(Reader {
            lines,
            comments,
            next: 0,
            last_line,
        })
    }

    fn line(&mut self, what: &str) -> Result<&Line<'a>> {
        let Some(line) = self.lines.get(self.next) else {
            return Err(Error::Parse {
                line: self.last_line + 1,
                column: 1,
                message: format!("unexpected end of input, expected {what}"),
            });
        };
        self.next += 1;
        Ok(line)
    }

    fn rest(&self) -> &[Line<'a>] {
        &self.lines[self.next..]
    }

    fn finish(&self) -> Result<()> {
        match self.rest().first() {
            Some(l) => Err(l.err(0, format!("unexpected `{}` line", l.keyword()))),
            None => Ok(()),
        }
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Reads an instance, ignoring comments and any role section.
pub fn read_instance(text: &str) -> Result<Instance> {
    read_instance_doc(text).map(|d| d.instance)
}

pub fn read_instance_doc(text: &str) -> Result<InstanceDoc> {
    let mut r = Reader::new(text, INSTANCE_HEADER)?;

    let line = r.line("`n <tasks> v <voters>`")?;
    line.expect_keyword("n")?;
    line.expect_len(4)?;
    if line.tokens[2].1 != "v" {
        return Err(line.err(2, "expected `v`"));
    }
    let n: usize = line.num(1)?;
    let v: usize = line.num(3)?;

    let line = r.line("`p` line")?;
    line.expect_keyword("p")?;
    line.expect_len(n + 1)?;
    let lengths: Vec<i64> = line.nums(1)?;
    if let Some(i) = lengths.iter().position(|&p| p < 1) {
        return Err(line.err(i + 1, format!("task {} has non-positive length", i + 1)));
    }

    let mut prefs = Vec::with_capacity(v);
    for k in 1..=v {
        let line = r.line(&format!("`pref {k}` line"))?;
        line.expect_keyword("pref")?;
        line.expect_len(n + 2)?;
        if line.num::<usize>(1)? != k {
            return Err(line.err(1, format!("expected voter number {k}")));
        }
        let ids: Vec<u32> = line.nums(2)?;
        let mut seen = vec![false; n];
        for (j, &id) in ids.iter().enumerate() {
            if id == 0 || id as usize > n {
                return Err(line.err(j + 2, format!("task {id} is outside 1..={n} in pref {k}")));
            }
            if std::mem::replace(&mut seen[id as usize - 1], true) {
                return Err(line.err(j + 2, format!("task {id} appears twice in pref {k}")));
            }
        }
        prefs.push(ids);
    }

    let mut roles = Vec::new();
    for line in r.rest() {
        if line.keyword() != "roles" {
            // Unknown trailing sections are left for newer readers.
            continue;
        }
        line.expect_len(3)?;
        let id: u32 = line.num(1)?;
        let task = TaskId::new(id)
            .filter(|t| t.index() < n)
            .ok_or_else(|| line.err(1, format!("task {id} is outside 1..={n}")))?;
        let role = line.tokens[2]
            .1
            .parse::<Role>()
            .map_err(|m| line.err(2, m))?;
        roles.push((task, role));
    }

    validate_instance(&lengths, &prefs).map_err(Error::InvalidInstance)?;
    Ok(InstanceDoc {
        instance: Instance::from_raw(lengths, prefs)?,
        comments: r.comments,
        roles,
    })
}

pub fn write_instance(inst: &Instance) -> String {
    write_instance_doc(&InstanceDoc::new(inst.clone()))
}

pub fn write_instance_doc(doc: &InstanceDoc) -> String {
    let inst = &doc.instance;
    let mut out = String::new();
    out.push_str(INSTANCE_HEADER);
    out.push('\n');
    for c in &doc.comments {
        out.push_str(format!("# {c}").trim_end());
        out.push('\n');
    }
    out.push_str(&format!("n {} v {}\n", inst.n(), inst.v()));
    out.push_str(&format!("p {}\n", join(inst.lengths())));
    for (k, pref) in inst.prefs().iter().enumerate() {
        out.push_str(&format!("pref {} {}\n", k + 1, join(pref.ids())));
    }
    for (task, role) in &doc.roles {
        out.push_str(&format!("roles {task} {role}\n"));
    }
    out
}

pub fn read_schedule(text: &str) -> Result<Schedule> {
    let mut r = Reader::new(text, SCHEDULE_HEADER)?;
    let line = r.line("`order` line")?;
    line.expect_keyword("order")?;
    let ids: Vec<u32> = line.nums(1)?;
    let sched = Schedule::from_ids(&ids).map_err(|e| line.err(0, e.to_string()))?;
    r.finish()?;
    Ok(sched)
}

pub fn write_schedule(sched: &Schedule) -> String {
    format!("{SCHEDULE_HEADER}\norder {}\n", join(sched.ids()))
}

pub fn read_3partition(text: &str) -> Result<ThreePartitionInstance> {
    let mut r = Reader::new(text, THREE_PARTITION_HEADER)?;
    let line = r.line("`q <q> B <B>`")?;
    line.expect_keyword("q")?;
    line.expect_len(4)?;
    if line.tokens[2].1 != "B" {
        return Err(line.err(2, "expected `B`"));
    }
    let q: usize = line.num(1)?;
    let b: i64 = line.num(3)?;
    let line = r.line("`x` line")?;
    line.expect_keyword("x")?;
    let xs: Vec<i64> = line.nums(1)?;
    r.finish()?;
    ThreePartitionInstance::new(q, b, xs)
}

pub fn write_3partition(tp: &ThreePartitionInstance) -> String {
    format!(
        "{THREE_PARTITION_HEADER}\nq {} B {}\nx {}\n",
        tp.q(),
        tp.b(),
        join(tp.xs())
    )
}

/// Reads a partition file. Index validity is checked against an instance
/// by [`crate::reductions::check_partition`], not here.
pub fn read_partition(text: &str) -> Result<TripletPartition> {
    let r = Reader::new(text, PARTITION_HEADER)?;
    let mut triplets = Vec::new();
    for line in r.rest() {
        line.expect_keyword("t")?;
        line.expect_len(4)?;
        triplets.push([line.num(1)?, line.num(2)?, line.num(3)?]);
    }
    Ok(TripletPartition::new(triplets))
}

pub fn write_partition(sol: &TripletPartition) -> String {
    let mut out = format!("{PARTITION_HEADER}\n");
    for t in &sol.triplets {
        out.push_str(&format!("t {}\n", join(t)));
    }
    out
}

/// Comment lines describing a reduced instance.
pub fn reduction_comments(red: &ReducedInstance) -> Vec<String> {
    let tp = red.source();
    let mut out = vec![
        format!("reduction {}", red.variant()),
        format!("source q {} B {} x {}", tp.q(), tp.b(), join(tp.xs())),
        format!("strict_bounds {}", red.strict_bounds()),
        format!("z {}", red.z()),
    ];
    if let Constants::ThreeVoter(c) = red.constants() {
        out.push(format!(
            "K {} B' {} O {} O' {}",
            c.k, c.b_prime, c.o, c.o_prime
        ));
    }
    match red.breakdown() {
        Breakdown::ThreeVoter(bd) => {
            out.push(format!(
                "D_L {} D_R {} D_M {} D_T {} D_NF {} slack {}",
                bd.d_l, bd.d_r, bd.d_m, bd.d_t, bd.d_nf, bd.slack
            ));
            out.push(format!("small_separator_sets {}", bd.small_separator_sets));
        }
        Breakdown::FourVoter(bd) => {
            let c = &bd.closed_form;
            out.push(format!(
                "closed_form C1 {} C2 {} C3 {} C4 {} J {} total {}",
                c.c[0],
                c.c[1],
                c.c[2],
                c.c[3],
                c.integers,
                c.total()
            ));
        }
    }
    out.extend(red.warnings().iter().map(|w| format!("warning {w}")));
    out
}

pub fn write_reduced(red: &ReducedInstance) -> String {
    write_instance_doc(&InstanceDoc {
        instance: red.instance().clone(),
        comments: reduction_comments(red),
        roles: red
            .roles()
            .iter()
            .enumerate()
            .map(|(i, &r)| (TaskId::from_index(i), r))
            .collect(),
    })
}

/// Reads a reduced instance written by [`write_reduced`]. The reduction is
/// rebuilt from the role table and must reproduce the file's instance.
pub fn read_reduced(text: &str) -> Result<ReducedInstance> {
    let doc = read_instance_doc(text)?;
    let n = doc.instance.n();
    let mut roles: Vec<Option<Role>> = vec![None; n];
    for (task, role) in &doc.roles {
        if roles[task.index()].replace(*role).is_some() {
            return Err(Error::Precondition(format!("task {task} has two roles")));
        }
    }
    let roles = roles
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.ok_or_else(|| {
                Error::Precondition(format!(
                    "task {} has no role; not a reduced instance",
                    i + 1
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ReducedInstance::from_parts(doc.instance, &roles)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = "sd-instance v1\nn 2 v 2\np 2 1\npref 1 1 2\npref 2 2 1\n";

    #[test]
    fn instance_round_trip() {
        let inst = read_instance(TWO).unwrap();
        assert_eq!(inst.lengths(), &[2, 1]);
        assert_eq!(write_instance(&inst), TWO);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "sd-instance v1\n# seed 7\n\nn 2 v 2\n  # mid\np 2 1\npref 1 1 2\npref 2 2 1\n";
        let doc = read_instance_doc(text).unwrap();
        assert_eq!(doc.comments, vec!["seed 7", "mid"]);
        assert_eq!(write_instance(&doc.instance), TWO);
    }

    #[test]
    fn errors_carry_positions() {
        let dup = "sd-instance v1\nn 2 v 1\np 1 1\npref 1 1 1\n";
        match read_instance(dup).unwrap_err() {
            Error::Parse {
                line,
                column,
                message,
            } => {
                assert_eq!((line, column), (4, 10));
                assert!(message.contains("twice"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
        let v2 = "sd-instance v2\nn 1 v 1\np 1\npref 1 1\n";
        assert!(matches!(read_instance(v2), Err(Error::Version { .. })));
        assert!(matches!(
            read_instance("hello\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        let bad = "sd-instance v1\nn 2 v 1\np 1 x\npref 1 1 2\n";
        assert!(matches!(
            read_instance(bad),
            Err(Error::Parse {
                line: 3,
                column: 5,
                ..
            })
        ));
        let short = "sd-instance v1\nn 2 v 2\np 1 1\npref 1 1 2\n";
        assert!(matches!(
            read_instance(short),
            Err(Error::Parse { line: 5, .. })
        ));
        let zero = "sd-instance v1\nn 1 v 1\np 0\npref 1 1\n";
        assert!(matches!(
            read_instance(zero),
            Err(Error::Parse { line: 3, .. })
        ));
        let empty = "sd-instance v1\nn 0 v 0\np\n";
        assert!(matches!(
            read_instance(empty),
            Err(Error::InvalidInstance(_))
        ));
    }

    #[test]
    fn unknown_trailing_sections_are_ignored() {
        let text = format!("{TWO}extra 1 2 3\nroles 1 int:1\n");
        let doc = read_instance_doc(&text).unwrap();
        assert_eq!(doc.roles.len(), 1);
    }

    #[test]
    fn schedule_files() {
        let s = read_schedule("sd-schedule v1\norder 2 1 3\n").unwrap();
        assert_eq!(write_schedule(&s), "sd-schedule v1\norder 2 1 3\n");
        assert!(read_schedule("sd-schedule v1\norder 1 1\n").is_err());
        assert!(read_schedule("sd-schedule v1\norder 1 2\norder 1 2\n").is_err());
    }

    #[test]
    fn three_partition_files() {
        let text = "3partition v1\nq 2 B 8\nx 3 3 2 3 3 2\n";
        let tp = read_3partition(text).unwrap();
        assert_eq!(write_3partition(&tp), text);
        assert!(matches!(
            read_3partition("3partition v1\nq 2 B 8\nx 3 3 2 3 3 3\n"),
            Err(Error::InvalidPartition(_))
        ));
        let p = "triplets v1\nt 1 2 3\nt 4 5 6\n";
        assert_eq!(write_partition(&read_partition(p).unwrap()), p);
        assert!(read_partition("triplets v1\nt 1 2\n").is_err());
    }

    #[test]
    fn reduced_round_trip() {
        let tp = ThreePartitionInstance::new(2, 6, vec![1, 2, 3, 1, 2, 3]).unwrap();
        let red = crate::reductions::build_reduction4(&tp).unwrap();
        let text = write_reduced(&red);
        assert!(text.contains("# z 1332\n"));
        let back = read_reduced(&text).unwrap();
        assert_eq!(back, red);
        assert_eq!(write_reduced(&back), text);
        // A plain instance is not a reduction.
        assert!(read_reduced(&write_instance(red.instance())).is_err());
    }
}
