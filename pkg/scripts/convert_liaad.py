#!/usr/bin/env python3
"""Convert LIAAD/KeywordExtractor-Datasets zip archives to the corpus format.

Documented recipe, not part of the tested package. Pass the path to
Inspec.zip, SemEval2017.zip or Krapivin2009.zip and an output JSONL path.

Inspec docsutf8 files carry the title on the first line, with continuation
lines wrapped as "\n\t". With --drop-first-line the text field keeps the
raw characters except that the first line (the title) is dropped and each
two-character wrap sequence "\n\t" becomes a single space; the title line
is dropped because the reference per-text symbol counts for Inspec exclude
it. SemEval2017 files are single paragraphs and convert as-is. Key files
hold one keyphrase per line.

Krapivin documents use --T / --A / --B section markers; --abstracts keeps
the --A section (Krapivin-A), --fulltext keeps --B (Krapivin-T).

Usage:
    python convert_liaad.py Inspec.zip inspec.jsonl --drop-first-line
    python convert_liaad.py SemEval2017.zip semeval2017.jsonl
    python convert_liaad.py Krapivin2009.zip krapivin_a.jsonl --abstracts
"""

import argparse
import json
import re
import sys
import zipfile


def clean_text(raw: str, drop_first_line: bool) -> str:
    body = raw[raw.find("\n") + 1 :] if drop_first_line else raw
    return body.replace("\n\t", " ")


def clean_keys(raw: str) -> list[str]:
    keys = (re.sub(r"\s+", " ", line).strip() for line in raw.splitlines())
    return [k for k in keys if k]


def krapivin_section(raw: str, marker: str) -> str:
    m = re.search(rf"^--{marker}\n(.*?)(?=^--[A-Z]|\Z)", raw, re.M | re.S)
    return m.group(1).strip() if m else ""


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("zip_path")
    ap.add_argument("out_path")
    ap.add_argument("--drop-first-line", action="store_true", help="Inspec: drop the title line")
    group = ap.add_mutually_exclusive_group()
    group.add_argument("--abstracts", action="store_true", help="Krapivin: keep the --A section")
    group.add_argument("--fulltext", action="store_true", help="Krapivin: keep the --B section")
    args = ap.parse_args()

    z = zipfile.ZipFile(args.zip_path)
    names = z.namelist()
    doc_names = sorted(n for n in names if "/docsutf8/" in n and n.endswith(".txt"))
    if not doc_names:
        print("no docsutf8/*.txt entries found", file=sys.stderr)
        return 1
    root = doc_names[0].split("/")[0]
    is_krapivin = args.abstracts or args.fulltext

    def sort_key(name):
        base = name.split("/")[-1][:-4]
        return (0, int(base)) if base.isdigit() else (1, base)

    n_written = 0
    with open(args.out_path, "w", encoding="utf-8") as out:
        for doc_name in sorted(doc_names, key=sort_key):
            base = doc_name.split("/")[-1][:-4]
            raw = z.read(doc_name).decode("utf-8")
            keys = clean_keys(z.read(f"{root}/keys/{base}.key").decode("utf-8"))
            if is_krapivin:
                marker = "A" if args.abstracts else "B"
                text = krapivin_section(raw, marker)
            else:
                text = clean_text(raw, args.drop_first_line)
            if not text:
                print(f"skipping {base}: empty text", file=sys.stderr)
                continue
            rec = {"id": base, "text": text, "keyphrases": keys}
            out.write(json.dumps(rec, ensure_ascii=False) + "\n")
            n_written += 1
    print(f"wrote {n_written} records to {args.out_path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
