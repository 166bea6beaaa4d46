#!/usr/bin/env python3
"""Regenerates the committed fixtures under data/.

Every output is deterministic (fixed seeds, fixed pools), so re-running
this script must reproduce the committed files byte for byte. The script
also prints the token-count oracle for data/fixtures/tokens_1000.txt;
that number is frozen into the textproc tests.
"""

import json
import random
import re
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"
FIXTURES = DATA / "fixtures"


def dump_line(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def write_jsonl(path: Path, records) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(dump_line(record) + "\n")


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


# ---------------------------------------------------------------------------
# pairs_100.jsonl: entity- and antonym-bearing synthetic sports reports.

TEAMS = [
    "Fleetwood", "Scunthorpe", "Rochdale", "Bradford", "Millwall", "Barnsley",
    "Walsall", "Oldham", "Gillingham", "Colchester", "Crawley", "Swindon",
    "Chesterfield", "Doncaster", "Rotherham", "Peterborough",
]

PEOPLE = [
    "Graham Alexander", "Joey Barton", "Paul Cook", "Karl Robinson",
    "Uwe Rosler", "Nigel Adkins", "Steven Pressley", "Derek Adams",
]

COMPETITIONS = ["League One", "League Two", "FA Cup", "Johnstone Trophy"]

# Adjectives and verbs drawn from the antonym lexicon so SA finds hits.
QUALITY = ["good", "bad", "strong", "weak", "early", "late", "fast", "slow"]
RESULT = ["win", "defeat", "draw", "victory", "loss", "comeback"]
DAYS = ["Saturday", "Sunday", "Tuesday", "Friday"]


def make_pairs_100():
    rng = random.Random(20260301)
    pairs = []
    for i in range(100):
        team_a, team_b = rng.sample(TEAMS, 2)
        person = rng.choice(PEOPLE)
        competition = rng.choice(COMPETITIONS)
        quality_a, quality_b = rng.sample(QUALITY, 2)
        result = rng.choice(RESULT)
        day = rng.choice(DAYS)
        goals = rng.randint(1, 4)

        document = (
            f"{team_a} beat {team_b} {goals}-{goals - 1} at home on {day} in a {quality_a} "
            f"display of attacking football. {person} praised the {quality_b} start his side "
            f"made in the {competition} fixture. The visitors rallied too late to stop "
            f"{team_a} from recording another {result} in front of a noisy crowd."
        )
        summary = (
            f"{team_a} top of {competition} after {quality_a} {result} over {team_b} on {day}."
        )
        pairs.append({"id": f"pair-{i:03d}", "document": document, "summary": summary})
    return pairs


# ---------------------------------------------------------------------------
# Separable corpus: each document shares a unique key token with its summary.
# Training summaries stay short; held-out summaries carry an aligned 8-token
# prefix (key + 7 document words) followed by an 8-token pad tail, so scoring
# with a summary limit of 8 sees pure aligned content for the true summary
# but a pad-diluted window once the words are shuffled. Pad words get trained
# embeddings through the 8 pad-themed training pairs.

CONTENT_WORDS = [f"word{i:02d}" for i in range(40)]
PAD_WORDS = [f"pad{i:02d}" for i in range(24)]


def make_separable():
    rng = random.Random(7041)
    train = []
    for i in range(64):
        key = f"key{i:02d}"
        pool = CONTENT_WORDS if i < 56 else PAD_WORDS
        doc_words = rng.sample(pool, 12)
        sum_words = rng.sample(doc_words, 7)
        train.append({
            "id": f"train-{i:02d}",
            "document": " ".join([key] + doc_words),
            "summary": " ".join([key] + sum_words),
        })

    heldout = []
    for j in range(32):
        key = f"key{j:02d}"
        doc_words = rng.sample(CONTENT_WORDS, 12)
        sum_words = rng.sample(doc_words, 7)
        tail = rng.sample(PAD_WORDS, 8)
        heldout.append({
            "id": f"held-{j:02d}",
            "document": " ".join([key] + doc_words),
            "summary": " ".join([key] + sum_words + tail),
        })
    return train, heldout


# ---------------------------------------------------------------------------
# eval_records.jsonl: 4 systems x 5 examples with graded corruption and
# hand-set human ratings (floats, strictly ordered system means).

def make_eval_records(pairs):
    base = {
        "sys-reference": (4.8, 4.9, 4.9, 4.8),
        "sys-partial": (3.6, 3.9, 4.1, 3.5),
        "sys-shuffled": (2.2, 2.6, 1.9, 2.4),
        "sys-offtopic": (1.2, 1.1, 1.6, 1.0),
    }
    jitter = [0.0, 0.1, -0.1, 0.2, -0.2]  # per example, keeps system order
    records = []
    for example_index in range(5):
        pair = pairs[example_index]
        words = pair["summary"].split()
        outputs = {
            "sys-reference": pair["summary"],
            "sys-partial": " ".join(words[: len(words) // 2]) + ".",
            "sys-shuffled": " ".join(reversed(words)),
            "sys-offtopic": "The committee reviewed quarterly budget forecasts in silence.",
        }
        for system_id, output in outputs.items():
            coh, con, flu, rel = base[system_id]
            offset = jitter[example_index]
            records.append({
                "example_id": pair["id"],
                "system_id": system_id,
                "document": pair["document"],
                "summary": output,
                "human": {
                    "coherence": round(min(5.0, max(1.0, coh + offset)), 1),
                    "consistency": round(min(5.0, max(1.0, con + offset)), 1),
                    "fluency": round(min(5.0, max(1.0, flu + offset)), 1),
                    "relevance": round(min(5.0, max(1.0, rel + offset)), 1),
                },
            })
    return records


# ---------------------------------------------------------------------------
# tokens_1000.txt: 1000 words with punctuation, plus a regex token oracle
# that mirrors the tokenizer contract (whitespace split, ASCII punctuation
# peeled off chunk edges one character at a time).

PUNCT = r"!-/:-@\[-`{-~"


def oracle_token_count(text: str) -> int:
    count = 0
    for chunk in text.split():
        head = re.match(rf"^[{PUNCT}]*", chunk).group(0)
        tail = re.search(rf"[{PUNCT}]*$", chunk[len(head):]).group(0)
        core = chunk[len(head): len(chunk) - len(tail)]
        count += len(head) + len(tail) + (1 if core else 0)
    return count


def make_tokens_1000():
    rng = random.Random(991)
    lexicon = [
        "match", "season", "table", "points", "fixture", "squad", "keeper",
        "defence", "attack", "minute", "half", "goal", "corner", "booking",
        "crowd", "pitch", "manager", "league", "derby", "referee",
    ]
    words = []
    sentence_len = 0
    for _ in range(1000):
        word = rng.choice(lexicon)
        sentence_len += 1
        if sentence_len >= rng.randint(6, 12):
            word += rng.choice([".", ".", "!", "?"])
            sentence_len = 0
        elif rng.random() < 0.08:
            word += ","
        words.append(word)
    text = ""
    for i, word in enumerate(words):
        text += word
        text += "\n" if (i + 1) % 12 == 0 else " "
    return text.rstrip() + "\n"


# ---------------------------------------------------------------------------
# Antonym lexicon: curated directional pairs, emitted in both directions.

ANTONYM_BASE = [
    ("good", "bad"), ("big", "small"), ("large", "small"), ("hot", "cold"),
    ("warm", "cool"), ("fast", "slow"), ("quick", "slow"), ("early", "late"),
    ("strong", "weak"), ("hard", "soft"), ("high", "low"), ("long", "short"),
    ("tall", "short"), ("wide", "narrow"), ("deep", "shallow"), ("heavy", "light"),
    ("bright", "dark"), ("loud", "quiet"), ("noisy", "quiet"), ("clean", "dirty"),
    ("new", "old"), ("young", "old"), ("rich", "poor"), ("full", "empty"),
    ("open", "closed"), ("happy", "sad"), ("glad", "sorry"), ("brave", "cowardly"),
    ("calm", "nervous"), ("careful", "careless"), ("cheap", "expensive"),
    ("clear", "vague"), ("clever", "stupid"), ("common", "rare"), ("cruel", "kind"),
    ("dangerous", "safe"), ("dry", "wet"), ("easy", "difficult"), ("simple", "complex"),
    ("fair", "unfair"), ("false", "true"), ("famous", "unknown"), ("far", "near"),
    ("fat", "thin"), ("thick", "thin"), ("first", "last"), ("flat", "bumpy"),
    ("foolish", "wise"), ("fresh", "stale"), ("friendly", "hostile"),
    ("generous", "selfish"), ("gentle", "rough"), ("smooth", "rough"),
    ("guilty", "innocent"), ("healthy", "sick"), ("honest", "dishonest"),
    ("humble", "proud"), ("hungry", "full"), ("important", "trivial"),
    ("interesting", "boring"), ("lazy", "diligent"), ("legal", "illegal"),
    ("likely", "unlikely"), ("lucky", "unlucky"), ("major", "minor"),
    ("modern", "ancient"), ("moist", "dry"), ("narrow", "broad"),
    ("natural", "artificial"), ("neat", "messy"), ("normal", "strange"),
    ("obvious", "subtle"), ("odd", "even"), ("optimistic", "pessimistic"),
    ("ordinary", "special"), ("patient", "impatient"), ("peaceful", "violent"),
    ("permanent", "temporary"), ("polite", "rude"), ("positive", "negative"),
    ("possible", "impossible"), ("powerful", "powerless"), ("present", "absent"),
    ("pretty", "ugly"), ("beautiful", "ugly"), ("private", "public"),
    ("probable", "improbable"), ("pure", "impure"), ("rapid", "gradual"),
    ("ready", "unprepared"), ("real", "fake"), ("regular", "irregular"),
    ("right", "wrong"), ("ripe", "unripe"), ("rough", "smooth"),
    ("round", "square"), ("rural", "urban"), ("sane", "insane"),
    ("secure", "insecure"), ("serious", "playful"), ("sharp", "blunt"),
    ("shiny", "dull"), ("silent", "loud"), ("similar", "different"),
    ("single", "married"), ("slim", "plump"), ("sober", "drunk"),
    ("solid", "hollow"), ("sour", "sweet"), ("steep", "gentle"),
    ("sticky", "slippery"), ("stiff", "flexible"), ("straight", "crooked"),
    ("sudden", "gradual"), ("tame", "wild"), ("tense", "relaxed"),
    ("tidy", "untidy"), ("tight", "loose"), ("tiny", "huge"),
    ("tired", "rested"), ("tough", "tender"), ("transparent", "opaque"),
    ("useful", "useless"), ("usual", "unusual"), ("vacant", "occupied"),
    ("valuable", "worthless"), ("visible", "invisible"), ("warm", "chilly"),
    ("weak", "sturdy"), ("wealthy", "destitute"), ("whole", "partial"),
    ("willing", "reluctant"), ("winning", "losing"), ("wise", "foolish"),
    # Verbs.
    ("accept", "reject"), ("accepted", "rejected"), ("agree", "disagree"),
    ("agreed", "disagreed"), ("allow", "forbid"), ("appear", "vanish"),
    ("arrive", "depart"), ("arrived", "departed"), ("ascend", "descend"),
    ("attack", "defend"), ("attacked", "defended"), ("begin", "end"),
    ("began", "ended"), ("borrow", "lend"), ("borrowed", "lent"),
    ("break", "repair"), ("broke", "repaired"), ("build", "demolish"),
    ("built", "demolished"), ("buy", "sell"), ("bought", "sold"),
    ("catch", "release"), ("caught", "released"), ("close", "open"),
    ("closed", "opened"), ("combine", "separate"), ("come", "go"),
    ("came", "went"), ("conceal", "reveal"), ("concealed", "revealed"),
    ("connect", "disconnect"), ("continue", "stop"), ("continued", "stopped"),
    ("create", "destroy"), ("created", "destroyed"), ("decrease", "increase"),
    ("decreased", "increased"), ("deny", "admit"), ("denied", "admitted"),
    ("die", "live"), ("died", "lived"), ("divide", "unite"),
    ("divided", "united"), ("doubt", "trust"), ("doubted", "trusted"),
    ("earn", "spend"), ("earned", "spent"), ("enter", "exit"),
    ("entered", "exited"), ("expand", "contract"), ("expanded", "contracted"),
    ("fail", "succeed"), ("failed", "succeeded"), ("fall", "rise"),
    ("fell", "rose"), ("find", "lose"), ("found", "lost"),
    ("finish", "start"), ("finished", "started"), ("float", "sink"),
    ("floated", "sank"), ("forget", "remember"), ("forgot", "remembered"),
    ("freeze", "melt"), ("froze", "melted"), ("gain", "lose"),
    ("gained", "lost"), ("gather", "scatter"), ("gathered", "scattered"),
    ("give", "take"), ("gave", "took"), ("grow", "shrink"),
    ("grew", "shrank"), ("help", "hinder"), ("helped", "hindered"),
    ("hire", "fire"), ("hired", "fired"), ("hold", "release"),
    ("held", "released"), ("include", "exclude"), ("included", "excluded"),
    ("laugh", "cry"), ("laughed", "cried"), ("lead", "follow"),
    ("led", "followed"), ("learn", "teach"), ("learned", "taught"),
    ("leave", "stay"), ("left", "stayed"), ("lift", "drop"),
    ("lifted", "dropped"), ("like", "dislike"), ("liked", "disliked"),
    ("load", "unload"), ("loaded", "unloaded"), ("lock", "unlock"),
    ("locked", "unlocked"), ("love", "hate"), ("loved", "hated"),
    ("obey", "defy"), ("obeyed", "defied"), ("offend", "please"),
    ("pass", "block"), ("passed", "blocked"), ("praise", "criticise"),
    ("praised", "criticised"), ("pull", "push"), ("pulled", "pushed"),
    ("punish", "reward"), ("punished", "rewarded"), ("raise", "lower"),
    ("raised", "lowered"), ("remember", "forget"), ("rise", "fall"),
    ("save", "waste"), ("saved", "wasted"), ("send", "receive"),
    ("sent", "received"), ("show", "hide"), ("showed", "hid"),
    ("shrink", "expand"), ("sit", "stand"), ("sat", "stood"),
    ("sleep", "wake"), ("slept", "woke"), ("smile", "frown"),
    ("smiled", "frowned"), ("strengthen", "weaken"), ("succeed", "fail"),
    ("tighten", "loosen"), ("win", "lose"), ("won", "lost"),
    # Nouns.
    ("win", "loss"), ("victory", "defeat"), ("success", "failure"),
    ("strength", "weakness"), ("friend", "enemy"), ("ally", "foe"),
    ("hero", "villain"), ("day", "night"), ("dawn", "dusk"),
    ("morning", "evening"), ("summer", "winter"), ("spring", "autumn"),
    ("north", "south"), ("east", "west"), ("top", "bottom"),
    ("front", "back"), ("start", "finish"), ("beginning", "end"),
    ("entrance", "exit"), ("arrival", "departure"), ("attack", "defence"),
    ("offence", "defence"), ("profit", "loss"), ("income", "expense"),
    ("war", "peace"), ("noise", "silence"), ("joy", "sorrow"),
    ("pleasure", "pain"), ("truth", "lie"), ("question", "answer"),
    ("problem", "solution"), ("cause", "effect"), ("floor", "ceiling"),
    ("city", "countryside"), ("majority", "minority"), ("maximum", "minimum"),
    ("presence", "absence"), ("comedy", "tragedy"), ("birth", "death"),
    ("past", "future"), ("youth", "age"), ("heat", "cold"),
    ("light", "darkness"), ("wealth", "poverty"), ("hope", "despair"),
    ("courage", "fear"), ("love", "hatred"), ("order", "chaos"),
    ("home", "away"), ("inside", "outside"), ("up", "down"),
    ("above", "below"), ("before", "after"), ("more", "less"),
    ("many", "few"), ("all", "none"), ("always", "never"),
    ("often", "rarely"), ("everywhere", "nowhere"), ("everyone", "nobody"),
    ("everything", "nothing"), ("together", "apart"), ("forward", "backward"),
    ("quickly", "slowly"), ("loudly", "quietly"), ("carefully", "carelessly"),
    ("early", "lately"), ("near", "far"), ("here", "there"),
]


def make_antonyms():
    directional = {}
    for left, right in ANTONYM_BASE:
        directional.setdefault(left, [])
        if right not in directional[left]:
            directional[left].append(right)
        directional.setdefault(right, [])
        if left not in directional[right]:
            directional[right].append(left)
    lines = ["# word: antonym1,antonym2 — lowercase, both directions listed"]
    for word in sorted(directional):
        antonyms = [a for a in directional[word] if a != word]
        if antonyms:
            lines.append(f"{word}: {','.join(antonyms)}")
    return "\n".join(lines) + "\n"


STOPWORDS = [
    "a", "about", "after", "all", "an", "and", "are", "as", "at", "be",
    "been", "before", "both", "but", "by", "during", "each", "few", "for",
    "from", "he", "her", "his", "i", "if", "in", "into", "is", "it", "its",
    "many", "more", "most", "no", "not", "of", "on", "once", "only", "or",
    "our", "she", "so", "some", "such", "that", "the", "their", "there",
    "these", "they", "this", "those", "to", "under", "until", "up", "was",
    "we", "were", "when", "while", "with", "you",
]


def make_stopwords():
    lines = ["# lowercase function words excluded from entity detection when sentence-initial"]
    lines.extend(STOPWORDS)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Entity fixture: 20 hand-written sentences; the golden span annotations
# live in tests/golden/entity_spans.golden (hand-annotated, not generated).

ENTITY_SENTENCES = [
    "Fleetwood beat Scunthorpe at home.",
    "The crowd cheered as Graham Alexander's men held on.",
    "the whole defence collapsed late in the game.",
    "Rochdale and Bradford drew in League One.",
    "After the break, Millwall pressed higher.",
    "He said Karl Robinson deserved credit.",
    "IT support fixed the stadium screens before kickoff.",
    "Barnsley, Walsall and Oldham all won away.",
    "no capital letters appear in this sentence at all.",
    "When Gillingham visited Colchester United, nothing happened.",
    "Under pressure, Crawley Town conceded twice.",
    "Swindon! Chesterfield? Doncaster.",
    "A late goal from Uwe Rosler's side settled it.",
    "Keeper Joe Day saved a penalty on Saturday.",
    "Both sides met again in the FA Cup on Tuesday.",
    "Peterborough United's new manager watched from the stands.",
    "During the first half, Rotherham dominated possession.",
    "This was not the plan, said Nigel Adkins.",
    "on Friday the league confirmed the fixture list.",
    "The FA charged both clubs after the Johnstone Trophy tie.",
]


def main():
    pairs = make_pairs_100()
    write_jsonl(FIXTURES / "pairs_100.jsonl", pairs)

    train, heldout = make_separable()
    write_jsonl(FIXTURES / "pairs_separable_train.jsonl", train)
    write_jsonl(FIXTURES / "pairs_separable_heldout.jsonl", heldout)

    write_jsonl(FIXTURES / "eval_records.jsonl", make_eval_records(pairs))

    tokens_text = make_tokens_1000()
    write_text(FIXTURES / "tokens_1000.txt", tokens_text)
    print(f"tokens_1000.txt oracle token count: {oracle_token_count(tokens_text)}")

    write_text(FIXTURES / "entity_sentences.txt", "\n".join(ENTITY_SENTENCES) + "\n")
    write_text(DATA / "antonyms.txt", make_antonyms())
    write_text(DATA / "stopwords.txt", make_stopwords())
    print("fixtures written under", DATA)


if __name__ == "__main__":
    main()
