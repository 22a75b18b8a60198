#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "finsent/errors.hpp"
#include "finsent/lexicon.hpp"
#include "test_util.hpp"

using namespace finsent;

TEST_CASE("class names round-trip") {
    for (size_t i = 0; i < kWordClassCount; ++i) {
        auto c = static_cast<WordClass>(i);
        CHECK(word_class_from_name(word_class_name(c)) == c);
    }
    CHECK(word_class_name(WordClass::LmPositive) == "LM_POSITIVE");
    CHECK(word_class_name(WordClass::MpqaNeutral) == "MPQA_NEUTRAL");
    CHECK_THROWS_AS(word_class_from_name("LM_BOGUS"), FormatError);
    CHECK_THROWS_AS(word_class_from_name("lm_positive"), FormatError);  // case matters
}

TEST_CASE("WordClassSet basics") {
    WordClassSet s;
    CHECK(s.empty());
    CHECK(s.count() == 0);
    s.insert(WordClass::LmPositive);
    s.insert(WordClass::MpqaPositive);
    s.insert(WordClass::LmPositive);  // idempotent
    CHECK(s.count() == 2);
    CHECK(s.contains(WordClass::LmPositive));
    CHECK(!s.contains(WordClass::LmNegative));

    WordClassSet t;
    t.insert(WordClass::LmNegative);
    t.merge(s);
    CHECK(t.count() == 3);
}

TEST_CASE("normalized TSV loading") {
    testutil::TempDir tmp;
    std::string path = tmp.file("lex.tsv",
                                "# comment\n"
                                "gain\tLM_POSITIVE\n"
                                "gain\tMPQA_POSITIVE\n"
                                "LOSS\tLM_NEGATIVE\n"
                                "\n"
                                "may\tLM_MODAL\n");
    auto lex = load_normalized(path);
    CHECK(lex.size() == 3);
    CHECK(lex.source_name == path);

    auto gain = lex.classes_of("gain");
    CHECK(gain.count() == 2);
    CHECK(gain.contains(WordClass::LmPositive));
    CHECK(gain.contains(WordClass::MpqaPositive));

    // Words are lowercased on load; lookups are exact.
    CHECK(lex.classes_of("loss").contains(WordClass::LmNegative));
    CHECK(lex.classes_of("LOSS").empty());
    CHECK(lex.classes_of("absent").empty());
}

TEST_CASE("TSV errors carry the line number") {
    testutil::TempDir tmp;
    CHECK_THROWS_WITH_AS(
        load_normalized(tmp.file("bad1.tsv", "gain\tLM_POSITIVE\nloss LM_NEGATIVE\n")),
        doctest::Contains(":2:"), FormatError);
    CHECK_THROWS_WITH_AS(
        load_normalized(tmp.file("bad2.tsv", "gain\tLM_GOOD\n")),
        doctest::Contains("unknown class label 'LM_GOOD'"), FormatError);
    // A leading tab is trimmed away, leaving a line with no separator.
    CHECK_THROWS_WITH_AS(load_normalized(tmp.file("bad3.tsv", "\tLM_POSITIVE\n")),
                         doctest::Contains("expected 'word"), FormatError);
    CHECK_THROWS_AS(load_normalized((tmp.path() / "missing.tsv").string()), IoError);
}

TEST_CASE("MPQA import") {
    testutil::TempDir tmp;
    std::string path = tmp.file(
        "mpqa.tff",
        "type=weaksubj len=1 word1=Abandon pos1=verb stemmed1=y priorpolarity=negative\n"
        "type=strongsubj len=1 word1=great pos1=adj stemmed1=n priorpolarity=positive\n"
        "type=strongsubj len=1 word1=brag pos1=verb stemmed1=y priorpolarity=both\n"
        "type=weaksubj len=1 word1=middle pos1=adj stemmed1=n priorpolarity=neutral\n"
        "type=weaksubj len=2 word1=of_course pos1=anypos stemmed1=n priorpolarity=positive\n"
        "type=weaksubj len=1 pos1=adj stemmed1=n priorpolarity=positive\n");
    MpqaImportStats stats;
    auto lex = import_mpqa(path, &stats);

    CHECK(stats.imported == 4);
    CHECK(stats.skipped_multiword == 1);
    CHECK(stats.skipped_missing_word == 1);
    CHECK(lex.size() == 4);

    CHECK(lex.classes_of("abandon").contains(WordClass::MpqaNegative));  // lowercased
    CHECK(lex.classes_of("great").contains(WordClass::MpqaPositive));
    CHECK(lex.classes_of("middle").contains(WordClass::MpqaNeutral));

    auto brag = lex.classes_of("brag");
    CHECK(brag.contains(WordClass::MpqaPositive));
    CHECK(brag.contains(WordClass::MpqaNegative));
    CHECK(brag.count() == 2);

    CHECK(lex.classes_of("of_course").empty());
}

TEST_CASE("merge unions entries and class sets") {
    Lexicon a;
    a.source_name = "a";
    a.entries["gain"].insert(WordClass::LmPositive);
    a.entries["loss"].insert(WordClass::LmNegative);

    Lexicon b;
    b.source_name = "b";
    b.entries["gain"].insert(WordClass::MpqaPositive);
    b.entries["court"].insert(WordClass::LmLitigious);

    auto m = merge({a, b});
    CHECK(m.size() == 3);
    CHECK(m.source_name == "a+b");
    CHECK(m.classes_of("gain").count() == 2);
    CHECK(m.classes_of("loss").contains(WordClass::LmNegative));
    CHECK(m.classes_of("court").contains(WordClass::LmLitigious));

    // Commutative up to the source name.
    auto rev = merge({b, a});
    CHECK(rev.classes_of("gain") == m.classes_of("gain"));
    CHECK(rev.size() == m.size());

    CHECK(merge({}).size() == 0);
}

TEST_CASE("shipped sample lexicon loads and covers all classes") {
    auto lex = load_normalized("data/sample_lexicon.tsv");
    CHECK(lex.size() >= 20);
    WordClassSet seen;
    for (const auto& [word, classes] : lex.entries) seen.merge(classes);
    CHECK(seen.count() == kWordClassCount);
}
