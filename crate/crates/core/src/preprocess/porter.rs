//! Porter stemming, following the classic reference implementation of the
//! 1980 algorithm. That implementation departs from the published paper in
//! three documented ways, all kept here because the widely used reference
//! vocabulary/output pair was generated from it:
//!
//! * words of length 1 or 2 are returned untouched;
//! * step 2 maps "bli" → "ble" rather than "abli" → "able";
//! * step 2 gains the rule (m>0) "logi" → "log".

/// Stems a lowercase ASCII-alphabetic token. Tokens outside that domain
/// (digits, mixed case, non-ASCII) pass through unchanged, as does anything
/// shorter than three characters.
pub fn porter_stem(token: &str) -> String {
    if token.len() <= 2 || !token.bytes().all(|b| b.is_ascii_lowercase()) {
        return token.to_string();
    }
    let mut stemmer = Stemmer {
        b: token.as_bytes().to_vec(),
        k: token.len() as isize - 1,
        j: 0,
    };
    stemmer.run();
    // The buffer is ASCII throughout.
    String::from_utf8(stemmer.b[..=stemmer.k as usize].to_vec()).unwrap()
}

/// Working state: `b[0..=k]` is the current word and `j` marks the end of
/// the stem left of the suffix most recently matched by `ends`.
struct Stemmer {
    b: Vec<u8>,
    k: isize,
    j: isize,
}

/// Suffix rewrite rules applied when the stem measure is positive.
/// Grouped so that for any word at most one group can match (each group is
/// keyed by the character the suffix places second-to-last for step 2 and
/// last for step 3); within a group the first match wins and ends the step.
const STEP2_RULES: &[(&[u8], &[u8])] = &[
    (b"ational", b"ate"),
    (b"tional", b"tion"),
    (b"enci", b"ence"),
    (b"anci", b"ance"),
    (b"izer", b"ize"),
    (b"bli", b"ble"),
    (b"alli", b"al"),
    (b"entli", b"ent"),
    (b"eli", b"e"),
    (b"ousli", b"ous"),
    (b"ization", b"ize"),
    (b"ation", b"ate"),
    (b"ator", b"ate"),
    (b"alism", b"al"),
    (b"iveness", b"ive"),
    (b"fulness", b"ful"),
    (b"ousness", b"ous"),
    (b"aliti", b"al"),
    (b"iviti", b"ive"),
    (b"biliti", b"ble"),
    (b"logi", b"log"),
];

const STEP3_RULES: &[(&[u8], &[u8])] = &[
    (b"icate", b"ic"),
    (b"ative", b""),
    (b"alize", b"al"),
    (b"iciti", b"ic"),
    (b"ical", b"ic"),
    (b"ful", b""),
    (b"ness", b""),
];

/// Suffixes stripped outright in step 4 when the stem measure exceeds 1.
/// "ion" additionally requires the stem to end in 's' or 't'.
const STEP4_SUFFIXES: &[&[u8]] = &[
    b"al", b"ance", b"ence", b"er", b"ic", b"able", b"ible", b"ant", b"ement", b"ment", b"ent",
    b"ion", b"ou", b"ism", b"ate", b"iti", b"ous", b"ive", b"ize",
];

impl Stemmer {
    fn run(&mut self) {
        self.step1ab();
        self.step1c();
        self.step2();
        self.step3();
        self.step4();
        self.step5();
    }

    fn at(&self, i: isize) -> u8 {
        self.b[i as usize]
    }

    /// True when b[i] acts as a consonant; 'y' is a consonant at the start
    /// of the word or after a vowel.
    fn is_consonant(&self, i: isize) -> bool {
        match self.at(i) {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.is_consonant(i - 1),
            _ => true,
        }
    }

    /// The measure m of b[0..=j]: the number of vowel→consonant transitions
    /// in its [C](VC)^m[V] decomposition.
    fn measure(&self) -> usize {
        let mut m = 0;
        let mut i = 0;
        while i <= self.j && self.is_consonant(i) {
            i += 1;
        }
        loop {
            while i <= self.j && !self.is_consonant(i) {
                i += 1;
            }
            if i > self.j {
                return m;
            }
            m += 1;
            while i <= self.j && self.is_consonant(i) {
                i += 1;
            }
        }
    }

    fn stem_has_vowel(&self) -> bool {
        (0..=self.j).any(|i| !self.is_consonant(i))
    }

    /// b[i-1] == b[i] and both are consonants.
    fn ends_double_consonant(&self, i: isize) -> bool {
        i >= 1 && self.at(i) == self.at(i - 1) && self.is_consonant(i)
    }

    /// consonant–vowel–consonant ending at i, where the final consonant is
    /// not w, x, or y; signals a short stem like "hop" that restores an 'e'.
    fn cvc(&self, i: isize) -> bool {
        if i < 2 || !self.is_consonant(i) || self.is_consonant(i - 1) || !self.is_consonant(i - 2) {
            return false;
        }
        !matches!(self.at(i), b'w' | b'x' | b'y')
    }

    /// True when the current word ends with `suffix`; on a match, `j` is set
    /// to the last index of the remaining stem.
    fn ends(&mut self, suffix: &[u8]) -> bool {
        let len = suffix.len() as isize;
        if len > self.k + 1 {
            return false;
        }
        let start = (self.k - len + 1) as usize;
        if &self.b[start..=self.k as usize] != suffix {
            return false;
        }
        self.j = self.k - len;
        true
    }

    /// Replaces the matched suffix (everything after j) with `s`.
    fn set_to(&mut self, s: &[u8]) {
        self.b.truncate((self.j + 1) as usize);
        self.b.extend_from_slice(s);
        self.k = self.j + s.len() as isize;
    }

    fn replace_if_measure_positive(&mut self, s: &[u8]) {
        if self.measure() > 0 {
            self.set_to(s);
        }
    }

    /// Plural and -ed/-ing endings.
    fn step1ab(&mut self) {
        if self.at(self.k) == b's' {
            if self.ends(b"sses") {
                self.k -= 2;
            } else if self.ends(b"ies") {
                self.set_to(b"i");
            } else if self.at(self.k - 1) != b's' {
                self.k -= 1;
            }
        }
        if self.ends(b"eed") {
            if self.measure() > 0 {
                self.k -= 1;
            }
        } else if (self.ends(b"ed") || self.ends(b"ing")) && self.stem_has_vowel() {
            self.k = self.j;
            if self.ends(b"at") {
                self.set_to(b"ate");
            } else if self.ends(b"bl") {
                self.set_to(b"ble");
            } else if self.ends(b"iz") {
                self.set_to(b"ize");
            } else if self.ends_double_consonant(self.k) {
                // Undouble, except after l, s, or z.
                self.k -= 1;
                if matches!(self.at(self.k), b'l' | b's' | b'z') {
                    self.k += 1;
                }
            } else if self.measure() == 1 && self.cvc(self.k) {
                self.set_to(b"e");
            }
        }
    }

    /// Terminal y → i when the stem contains a vowel.
    fn step1c(&mut self) {
        if self.ends(b"y") && self.stem_has_vowel() {
            self.b[self.k as usize] = b'i';
        }
    }

    fn step2(&mut self) {
        if self.k < 1 {
            return;
        }
        let penultimate = self.at(self.k - 1);
        for &(suffix, replacement) in STEP2_RULES {
            // Rules whose suffix cannot place `penultimate` second-to-last
            // can never match; skipping them preserves first-match order
            // within the one group that can.
            if suffix[suffix.len() - 2] != penultimate {
                continue;
            }
            if self.ends(suffix) {
                self.replace_if_measure_positive(replacement);
                return;
            }
        }
    }

    fn step3(&mut self) {
        let last = self.at(self.k);
        for &(suffix, replacement) in STEP3_RULES {
            if suffix[suffix.len() - 1] != last {
                continue;
            }
            if self.ends(suffix) {
                self.replace_if_measure_positive(replacement);
                return;
            }
        }
    }

    fn step4(&mut self) {
        if self.k < 1 {
            return;
        }
        let penultimate = self.at(self.k - 1);
        let mut matched = false;
        for &suffix in STEP4_SUFFIXES {
            // All step-4 suffixes are at least two bytes; the same group
            // argument as step2 applies.
            if suffix[suffix.len() - 2] != penultimate {
                continue;
            }
            if suffix == b"ion" {
                if self.ends(b"ion") && self.j >= 0 && matches!(self.at(self.j), b's' | b't') {
                    matched = true;
                    break;
                }
            } else if self.ends(suffix) {
                matched = true;
                break;
            }
        }
        if matched && self.measure() > 1 {
            self.k = self.j;
        }
    }

    /// Final -e removal and -ll reduction. `j` covers the whole word here,
    /// mirroring the reference implementation (a trailing vowel never adds
    /// a vowel→consonant transition, so the measure is unaffected).
    fn step5(&mut self) {
        self.j = self.k;
        if self.at(self.k) == b'e' {
            let m = self.measure();
            if m > 1 || (m == 1 && !self.cvc(self.k - 1)) {
                self.k -= 1;
            }
        }
        if self.at(self.k) == b'l' && self.ends_double_consonant(self.k) && self.measure() > 1 {
            self.k -= 1;
        }
    }
}
