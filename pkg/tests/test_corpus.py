"""
Tests for document reading, tokenization and vocabulary building.
"""

import random
from collections import Counter

import pytest

from keyword_tracker.core.config import TokenRules
from keyword_tracker.corpus import (
    Document,
    Vocabulary,
    build_vocabulary,
    iter_token_ids,
    read_documents,
    tokenize,
    write_documents,
)
from keyword_tracker.exceptions import ConfigurationError, DataFormatError


def _docs(*texts: str):
    return [Document(id=str(i), text=t) for i, t in enumerate(texts)]


class TestReadDocuments:
    def test_jsonl_fields(self, write_jsonl):
        path = write_jsonl([{"id": "1", "text": "hello world", "domain": "d"}])
        result = read_documents(path)
        assert len(result.documents) == 1
        doc = result.documents[0]
        assert (doc.id, doc.text, doc.domain) == ("1", "hello world", "d")
        assert result.skipped == 0

    def test_txt_skips_blank_lines(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_text("a b\n\nc\n", encoding="utf-8")
        result = read_documents(path, "txt")
        assert [d.id for d in result.documents] == ["line-1", "line-3"]
        assert all(d.domain == "default" for d in result.documents)

    def test_malformed_line_is_skipped_and_counted(self, write_jsonl):
        path = write_jsonl([{"id": "1", "text": "ok"}, "{not json"])
        result = read_documents(path)
        assert len(result.documents) == 1
        assert result.skipped == 1
        assert result.first_bad_line == 2

    def test_invalid_utf8_line_is_skipped_and_counted(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_bytes(
            b'{"id": "1", "text": "caf\xc3\xa9 ok"}\n'
            b'{"id": "2", "text": "bad \xff\xfe"}\n'
            b'{"id": "3", "text": "fine"}\n'
        )
        result = read_documents(path)
        assert [d.id for d in result.documents] == ["1", "3"]
        assert result.documents[0].text == "café ok"
        assert (result.skipped, result.first_bad_line) == (1, 2)

    def test_invalid_utf8_in_txt(self, tmp_path):
        path = tmp_path / "corpus.txt"
        path.write_bytes(b"first post\r\n\xff\xfe broken\nthird post\n")
        result = read_documents(path, "txt")
        assert [(d.id, d.text) for d in result.documents] == [("line-1", "first post"), ("line-3", "third post")]
        assert (result.skipped, result.first_bad_line) == (1, 2)

    def test_mostly_undecodable_file_is_fatal(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_bytes(b'{"id": "1", "text": "ok"}\n\xff\n\xfe\xfe\n')
        with pytest.raises(DataFormatError) as excinfo:
            read_documents(path)
        assert excinfo.value.line_number == 2

    def test_mostly_malformed_file_is_fatal(self, write_jsonl):
        path = write_jsonl([{"id": "1", "text": "ok"}, "{bad", '{"id": "", "text": "x"}'])
        with pytest.raises(DataFormatError) as excinfo:
            read_documents(path)
        assert excinfo.value.line_number == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_documents(tmp_path / "absent.jsonl")

    def test_write_then_read(self, tmp_path):
        docs = [Document(id="a", text="first post", domain="metoo"), Document(id="b", text="second")]
        path = tmp_path / "out.jsonl"
        assert write_documents(path, docs) == 2
        assert read_documents(path).documents == docs


class TestTokenize:
    def test_social_media_defaults(self):
        assert tokenize("@user check https://t.co/x #MeToo!!") == ["check", "#metoo"]

    def test_length_filter(self):
        assert tokenize("A b") == []

    def test_case_preserved_when_lowercase_off(self):
        assert tokenize("Weinstein trial", TokenRules(lowercase=False)) == ["Weinstein", "trial"]

    def test_interior_punctuation_kept(self):
        assert tokenize("(don't) stop.") == ["don't", "stop"]

    def test_hashtag_inside_brackets(self):
        assert tokenize("(#MeToo)") == ["#metoo"]

    def test_hashtag_marker_dropped_when_disabled(self):
        assert tokenize("#MeToo", TokenRules(keep_hashtags=False)) == ["metoo"]

    def test_mentions_kept_without_marker(self):
        assert tokenize("@Alice hi", TokenRules(drop_mentions=False)) == ["alice", "hi"]

    def test_urls_kept_when_enabled(self):
        assert tokenize("see www.example.org", TokenRules(drop_urls=False)) == ["see", "www.example.org"]

    def test_idempotent_on_own_output(self):
        text = "RT @bob: Believe #survivors!! https://x.co/1 ... it's (finally) time #MeToo"
        for token in tokenize(text):
            assert tokenize(token) == [token]


class TestVocabulary:
    def test_threshold(self):
        vocab = build_vocabulary(_docs("aa aa bb"), min_count=2)
        assert vocab.tokens == ["aa"]
        assert vocab.counts == [2]

    def test_ties_broken_lexicographically(self):
        vocab = build_vocabulary(_docs("bb aa bb aa"), min_count=1)
        assert vocab.tokens == ["aa", "bb"]

    def test_empty_vocabulary_is_fatal(self):
        with pytest.raises(ConfigurationError):
            build_vocabulary(_docs("aa bb"), min_count=5)

    def test_min_count_must_be_positive(self):
        with pytest.raises(ConfigurationError):
            build_vocabulary(_docs("aa"), min_count=0)

    def test_counts_match_counting_oracle(self):
        rng = random.Random(3)
        words = [f"w{i}" for i in range(40)]
        texts = [" ".join(rng.choice(words) for _ in range(20)) for _ in range(50)]
        vocab = build_vocabulary(_docs(*texts), min_count=3)

        oracle = Counter(w for t in texts for w in t.split())
        assert vocab.frequencies() == {w: c for w, c in oracle.items() if c >= 3}
        assert sum(vocab.counts) + vocab.dropped_tokens == vocab.total_tokens == 1000
        ordered = sorted(vocab.frequencies().items(), key=lambda wc: (-wc[1], wc[0]))
        assert vocab.tokens == [w for w, _ in ordered]
        assert all(vocab.id_of(t) == i for i, t in enumerate(vocab.tokens))

    def test_tsv_round_trip(self, tmp_path):
        vocab = build_vocabulary(_docs("#metoo believe #metoo survivor believe #metoo"))
        path = tmp_path / "vocab.tsv"
        vocab.save_tsv(path)
        assert path.read_text(encoding="utf-8").splitlines()[0] == "token\tid\tcount"
        assert Vocabulary.load_tsv(path) == vocab

    def test_tsv_id_gap_is_rejected(self, tmp_path):
        path = tmp_path / "vocab.tsv"
        path.write_text("token\tid\tcount\naa\t0\t3\nbb\t2\t1\n", encoding="utf-8")
        with pytest.raises(DataFormatError) as excinfo:
            Vocabulary.load_tsv(path)
        assert excinfo.value.line_number == 3

    def test_token_ids_drop_out_of_vocabulary_and_empty_docs(self):
        docs = _docs("aa bb aa", "cc", "bb zz aa")
        vocab = build_vocabulary(docs, min_count=2)
        assert list(iter_token_ids(docs, vocab, TokenRules())) == [[0, 1, 0], [1, 0]]
