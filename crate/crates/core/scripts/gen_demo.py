#!/usr/bin/env python3
"""Generate the bundled demo corpus.

Writes data/demo/{bitext.tsv, annotations.conllu, nlm_ppl.tsv, synthetic_nlm_ppl.tsv,
synthetic.tsv, synthetic.conllu}. English sources come from a small
dependency grammar, so the CoNLL-U annotation is exact by construction.
Targets are pseudo-Hindi in Devanagari. Noise of every filter kind is
planted in the real corpus. Output is deterministic.
"""

import hashlib
import os
import random

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data", "demo")

NOUNS = [
    ("minister", "ministers"), ("committee", "committees"), ("farmer", "farmers"),
    ("student", "students"), ("report", "reports"), ("scheme", "schemes"),
    ("village", "villages"), ("project", "projects"), ("river", "rivers"),
    ("court", "courts"), ("company", "companies"), ("teacher", "teachers"),
    ("officer", "officers"), ("hospital", "hospitals"), ("road", "roads"),
    ("school", "schools"), ("bridge", "bridges"), ("market", "markets"),
    ("festival", "festivals"), ("election", "elections"), ("budget", "budgets"),
    ("policy", "policies"), ("worker", "workers"), ("district", "districts"),
    ("team", "teams"), ("scientist", "scientists"), ("law", "laws"),
    ("water", "waters"), ("train", "trains"), ("meeting", "meetings"),
]
ADJS = ["new", "large", "rural", "local", "national", "important", "small",
        "public", "old", "several", "senior", "annual", "complete", "young"]
# base, past, 3sg present, past participle, present participle
VERBS = [
    ("announce", "announced", "announces", "announced", "announcing"),
    ("inspect", "inspected", "inspects", "inspected", "inspecting"),
    ("approve", "approved", "approves", "approved", "approving"),
    ("build", "built", "builds", "built", "building"),
    ("visit", "visited", "visits", "visited", "visiting"),
    ("review", "reviewed", "reviews", "reviewed", "reviewing"),
    ("launch", "launched", "launches", "launched", "launching"),
    ("discuss", "discussed", "discusses", "discussed", "discussing"),
    ("support", "supported", "supports", "supported", "supporting"),
    ("complete", "completed", "completes", "completed", "completing"),
    ("open", "opened", "opens", "opened", "opening"),
    ("receive", "received", "receives", "received", "receiving"),
    ("measure", "measured", "measures", "measured", "measuring"),
    ("praise", "praised", "praises", "praised", "praising"),
]
PEOPLE = [["Ram", "Nath", "Kovind"], ["Anita", "Sharma"], ["Rahul", "Verma"],
          ["Priya", "Nair"], ["Manohar", "Lal"], ["Sunita", "Rao"], ["Arjun", "Mehta"]]
PLACES = [["New", "Delhi"], ["Mumbai"], ["Kerala"], ["Uttar", "Pradesh"], ["Chennai"], ["Assam"]]
ORGS = [["Lokpal"], ["ISRO"], ["Reserve", "Bank"], ["Indian", "Railways"], ["NITI", "Aayog"]]
PREPS = ["in", "of", "to", "for", "with", "on", "at", "from", "by"]
MONTHS = ["January", "March", "June", "October", "November"]

DEF_ART = {"Definite": "Def", "PronType": "Art"}
IND_ART = {"Definite": "Ind", "PronType": "Art"}
DEM = {"Number": "Sing", "PronType": "Dem"}
FIN_PAST = {"Mood": "Ind", "Tense": "Past", "VerbForm": "Fin"}
FIN_PRES = {"Mood": "Ind", "Number": "Sing", "Person": "3", "Tense": "Pres", "VerbForm": "Fin"}
PART_PAST = {"Tense": "Past", "VerbForm": "Part"}
PART_PRES = {"Tense": "Pres", "VerbForm": "Part"}
INF = {"VerbForm": "Inf"}
PRONS = {
    "he": {"Case": "Nom", "Gender": "Masc", "Number": "Sing", "Person": "3", "PronType": "Prs"},
    "she": {"Case": "Nom", "Gender": "Fem", "Number": "Sing", "Person": "3", "PronType": "Prs"},
    "they": {"Case": "Nom", "Number": "Plur", "Person": "3", "PronType": "Prs"},
    "we": {"Case": "Nom", "Number": "Plur", "Person": "1", "PronType": "Prs"},
}


class Tok:
    def __init__(self, form, upos, deprel, feats=None, ner="O", head=None):
        self.form, self.upos, self.deprel = form, upos, deprel
        self.feats = feats or {}
        self.ner = ner
        self.head = head


def noun_phrase(rng, deprel, allow_pp=True):
    """Returns (tokens in order, head token)."""
    r = rng.random()
    if r < 0.15:
        kind, pool = rng.choice([("PER", PEOPLE), ("LOC", PLACES), ("ORG", ORGS)])
        words = rng.choice(pool)
        head = Tok(words[0], "PROPN", deprel, {"Number": "Sing"}, "B-" + kind)
        toks = [head]
        for w in words[1:]:
            toks.append(Tok(w, "PROPN", "flat", {"Number": "Sing"}, "I-" + kind, head))
        return toks, head
    if r < 0.25 and deprel == "nsubj":
        p = rng.choice(sorted(PRONS))
        t = Tok(p, "PRON", deprel, dict(PRONS[p]))
        return [t], t
    sing, plur = rng.choice(NOUNS)
    plural = rng.random() < 0.35
    head = Tok(plur if plural else sing, "NOUN", deprel, {"Number": "Plur" if plural else "Sing"})
    toks = []
    d = rng.random()
    if d < 0.6:
        toks.append(Tok("the", "DET", "det", dict(DEF_ART), head=head))
    elif d < 0.75 and not plural:
        toks.append(Tok("a", "DET", "det", dict(IND_ART), head=head))
    elif d < 0.85 and not plural:
        toks.append(Tok("this", "DET", "det", dict(DEM), head=head))
    for _ in range(rng.choice([0, 0, 1, 1, 2])):
        toks.append(Tok(rng.choice(ADJS), "ADJ", "amod", {"Degree": "Pos"}, head=head))
    toks.append(head)
    if allow_pp and rng.random() < 0.3:
        pp, pp_head = prep_phrase(rng, "nmod", allow_pp=False)
        pp_head.head = head
        toks.extend(pp)
    return toks, head


def prep_phrase(rng, deprel, allow_pp=True):
    if rng.random() < 0.15:
        month = Tok(rng.choice(MONTHS), "PROPN", deprel, {"Number": "Sing"})
        adp = Tok("on", "ADP", "case", head=month)
        num = Tok(str(rng.randint(1, 28)), "NUM", "nummod", {"NumForm": "Digit", "NumType": "Card"}, head=month)
        return [adp, month, num], month
    np_toks, np_head = noun_phrase(rng, deprel, allow_pp)
    adp = Tok(rng.choice(PREPS), "ADP", "case", head=np_head)
    return [adp] + np_toks, np_head


def clause(rng, subj_allowed=True):
    """Returns (tokens, main verb)."""
    base, past, pres, pastp, presp = rng.choice(VERBS)
    form = rng.random()
    toks = []
    if subj_allowed:
        subj, subj_head = noun_phrase(rng, "nsubj")
        toks.extend(subj)
    if form < 0.4:
        verb = Tok(past, "VERB", "root", dict(FIN_PAST))
        aux = []
    elif form < 0.6:
        verb = Tok(pres, "VERB", "root", dict(FIN_PRES))
        aux = []
    elif form < 0.75:
        verb = Tok(pastp, "VERB", "root", dict(PART_PAST))
        aux = [Tok(rng.choice(["has", "had"]), "AUX", "aux",
                   dict(FIN_PRES) if rng.random() < 0.5 else dict(FIN_PAST), head=verb)]
        aux[0].feats = dict(FIN_PRES) if aux[0].form == "has" else dict(FIN_PAST)
    elif form < 0.9:
        verb = Tok(presp, "VERB", "root", dict(PART_PRES))
        aux = [Tok("is", "AUX", "aux", dict(FIN_PRES), head=verb)]
    else:
        verb = Tok(base, "VERB", "root", dict(INF))
        aux = [Tok("will", "AUX", "aux", {"VerbForm": "Fin"}, head=verb)]
    if subj_allowed:
        subj_head.head = verb
    toks.extend(aux)
    toks.append(verb)
    if rng.random() < 0.8:
        obj, obj_head = noun_phrase(rng, "obj")
        obj_head.head = verb
        toks.extend(obj)
    for _ in range(rng.choice([0, 1, 1, 2, 3])):
        pp, pp_head = prep_phrase(rng, "obl")
        pp_head.head = verb
        toks.extend(pp)
    return toks, verb


def fragment(rng):
    words = [rng.choice(NOUNS)[0] for _ in range(rng.randint(2, 3))]
    head = Tok(words[-1], "NOUN", "root", {"Number": "Sing"})
    toks = [Tok(w, "NOUN", "compound", {"Number": "Sing"}, head=head) for w in words[:-1]]
    return toks + [head]


def sentence(rng, clause_weights):
    if rng.random() < 0.08:
        return fragment(rng)
    n = rng.choices([1, 2, 3, 4, 5], weights=clause_weights)[0]
    toks, root = clause(rng)
    for _ in range(n - 1):
        kind = rng.random()
        if kind < 0.5:
            if rng.random() < 0.5:
                toks.append(Tok(",", "PUNCT", "punct"))
                toks[-1].head = None
                pending_punct = toks[-1]
            else:
                pending_punct = None
            cc = Tok(rng.choice(["and", "but"]), "CCONJ", "cc")
            sub, verb = clause(rng, subj_allowed=rng.random() < 0.7)
            verb.deprel, verb.head, cc.head = "conj", root, verb
            if pending_punct:
                pending_punct.head = verb
            toks.append(cc)
            toks.extend(sub)
        else:
            mark = Tok(rng.choice(["because", "while", "after", "that"]), "SCONJ", "mark")
            sub, verb = clause(rng)
            verb.deprel, verb.head, mark.head = "advcl", root, verb
            if mark.form == "that":
                verb.deprel = "ccomp"
            toks.append(mark)
            toks.extend(sub)
    toks.append(Tok(".", "PUNCT", "punct", head=root))
    return toks


DEVANAGARI = ["क", "ख", "ग", "च", "ज", "ट", "ड", "त", "द", "न", "प", "ब", "म", "य", "र", "ल", "व", "स", "ह"]
MATRAS = ["", "ा", "ि", "ी", "ु", "े", "ो"]


def hindi_word(w):
    h = hashlib.sha256(w.lower().encode()).digest()
    n = 2 + h[0] % 3
    return "".join(DEVANAGARI[h[1 + i] % len(DEVANAGARI)] + MATRAS[h[5 + i] % len(MATRAS)] for i in range(n))


def translate(toks_or_words):
    words = [t.form if isinstance(t, Tok) else t for t in toks_or_words]
    out = [hindi_word(w) for w in words if w not in {".", ","}]
    return " ".join(out) + " ।"


def conllu_block(sent_id, toks, text):
    index = {id(t): i + 1 for i, t in enumerate(toks)}
    lines = [f"# sent_id = {sent_id}", f"# text = {text}"]
    for i, t in enumerate(toks):
        head = 0 if t.head is None else index[id(t.head)]
        if t.deprel == "root":
            head = 0
        feats = "|".join(f"{k}={v}" for k, v in sorted(t.feats.items())) or "_"
        misc = "_" if t.ner == "O" else f"NER={t.ner}"
        lines.append(f"{i + 1}\t{t.form}\t_\t{t.upos}\t_\t{feats}\t{head}\t{t.deprel}\t_\t{misc}")
    return "\n".join(lines) + "\n\n"


def source_text(toks):
    return " ".join(t.form for t in toks)


def make_real(rng):
    weights = [40, 30, 18, 9, 3]
    records = []  # (id, source, target, [blocks of toks])

    def new_id():
        return f"d{len(records) + 1:04d}"

    for _ in range(940):
        toks = sentence(rng, weights)
        records.append([new_id(), source_text(toks), translate(toks), [toks], "clean"])
    clean = list(records)

    for i in range(25):  # exact duplicates
        src = clean[rng.randrange(len(clean))]
        records.append([new_id(), src[1], src[2], src[3], "duplicate"])
    for i in range(20):  # romanized target
        toks = sentence(rng, weights)
        roman = " ".join(hindi_translit(t.form) for t in toks if t.upos != "PUNCT")
        records.append([new_id(), source_text(toks), roman, [toks], "roman"])
    for i in range(15):  # length ratio
        toks = sentence(rng, [0, 10, 20, 20, 10])
        while len(toks) < 12:
            toks = sentence(rng, [0, 10, 20, 20, 10])
        records.append([new_id(), source_text(toks), hindi_word(toks[0].form), [toks], "ratio"])
    for i in range(10):  # one source, two targets
        src = clean[rng.randrange(len(clean))]
        alt = translate([w + "x" for w in src[1].split()])
        records.append([new_id(), src[1], alt, src[3], "one_to_many"])
    for i in range(15):  # two sentences under one id
        a, b = sentence(rng, weights), sentence(rng, weights)
        text = source_text(a) + " " + source_text(b)
        records.append([new_id(), text, translate(a) + " " + translate(b), [a, b], "multi"])

    rng.shuffle(records)
    return records


def hindi_translit(w):
    h = hashlib.sha256(w.encode()).digest()
    cons = "kgcjtdnpbmyrlvsh"
    vows = "aeiou"
    return "".join(cons[h[i] % len(cons)] + vows[h[i + 4] % len(vows)] for i in range(2 + h[9] % 2))


def make_synthetic(rng):
    weights = [5, 15, 30, 30, 20]
    records = []
    for i in range(700):
        sid = f"syn{i + 1:04d}"
        if i % 60 == 59:
            a, b = sentence(rng, weights), sentence(rng, weights)
            blocks = [a, b]
            text, tgt = source_text(a) + " " + source_text(b), translate(a) + " " + translate(b)
        else:
            toks = sentence(rng, weights)
            blocks = [toks]
            text, tgt = source_text(toks), translate(toks)
        ll = round(-0.05 - rng.random() * 1.5, 4)
        records.append([sid, text, tgt, blocks, ll])
    return records


def write(name, content):
    with open(os.path.join(OUT, name), "w", encoding="utf-8", newline="\n") as f:
        f.write(content)


def main():
    os.makedirs(OUT, exist_ok=True)
    rng = random.Random(20240607)
    real = make_real(rng)
    write("bitext.tsv", "".join(f"{r[0]}\t{r[1]}\t{r[2]}\n" for r in real))
    write("annotations.conllu", "".join(
        conllu_block(r[0], toks, source_text(toks)) for r in real for toks in r[3]))
    nlm = []
    for r in real:
        n = len(r[1].split())
        nlm.append(f"{r[0]}\tnlm_ppl={round(12 + 0.9 * n + rng.random() * 6, 3)}\n")
    write("nlm_ppl.tsv", "".join(nlm))

    syn = make_synthetic(rng)
    write("synthetic.tsv", "".join(f"{r[0]}\t{r[1]}\t{r[2]}\tavg_logprob={r[4]}\n" for r in syn))
    write("synthetic.conllu", "".join(
        conllu_block(r[0], toks, source_text(toks)) for r in syn for toks in r[3]))
    write("synthetic_nlm_ppl.tsv", "".join(
        f"{r[0]}\tnlm_ppl={round(12 + 0.9 * len(r[1].split()) + rng.random() * 6, 3)}\n" for r in syn))


if __name__ == "__main__":
    main()
