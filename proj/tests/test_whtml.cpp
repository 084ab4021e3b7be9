#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "generators.hpp"
#include "reference_matcher.hpp"
#include "whtmlgate/digest.hpp"
#include "whtmlgate/whtml/document.hpp"
#include "whtmlgate/whtml/wellformed.hpp"

using namespace whtmlgate;
using namespace whtmlgate::whtml;

namespace {

ErrorKind parse_error_kind(std::string_view text) {
    try {
        parse(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "parse succeeded: " << text;
    return ErrorKind::Syntax;
}

ErrorKind classify_error_kind(std::string_view raw) {
    try {
        classify_tag(raw, TagRegistry::builtin());
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "classified: " << raw;
    return ErrorKind::Syntax;
}

std::vector<TokenKind> kinds(const std::vector<Token>& tokens) {
    std::vector<TokenKind> out;
    for (const auto& t : tokens) out.push_back(t.kind);
    return out;
}

std::optional<Violation> check_text(std::string_view text) { return check_well_formed(tokenize(text)); }

}  // namespace

TEST(digest, fnv1a_published_vectors)
{
    EXPECT_EQ(fnv1a64(std::string_view{}), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64(std::string_view{"a"}), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64(std::string_view{"foobar"}), 0x85944171f73967e8ULL);
    EXPECT_EQ(to_hex16(0xcbf29ce484222325ULL), "cbf29ce484222325");
    EXPECT_EQ(to_hex16(1), "0000000000000001");
}

TEST(registry, builtin_sizes)
{
    const auto& r = TagRegistry::builtin();
    EXPECT_EQ(r.shared().size(), 21u);
    EXPECT_EQ(r.wml_only().size(), 14u);
    EXPECT_EQ(r.shared().size() + r.wml_only().size(), kWmlVocabularySize);
    EXPECT_GE(r.html_only().size(), 30u);
}

TEST(registry, builtin_sets_disjoint)
{
    const auto& r = TagRegistry::builtin();
    for (const auto& n : r.html_only()) {
        EXPECT_FALSE(r.is_wml_only(n)) << n;
        EXPECT_FALSE(r.is_shared(n)) << n;
    }
    for (const auto& n : r.wml_only()) EXPECT_FALSE(r.is_shared(n)) << n;
}

TEST(registry, builtin_matches_data_file)
{
    std::ifstream in(WHTMLGATE_SOURCE_DIR "/data/default.registry", std::ios::binary);
    ASSERT_TRUE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(buf.str(), TagRegistry::builtin_text());
    EXPECT_EQ(TagRegistry::from_text(buf.str()).shared(), TagRegistry::builtin().shared());
}

TEST(registry, from_text_skips_comments_and_blank_lines)
{
    std::string text = "# comment\n\nhtml\tdiv\n";
    for (const auto& n : TagRegistry::builtin().shared()) text += "shared\t" + n + "\n";
    for (const auto& n : TagRegistry::builtin().wml_only()) text += "wml\t" + n + "\n";
    const auto r = TagRegistry::from_text(text);
    EXPECT_EQ(r.html_only().size(), 1u);
    EXPECT_TRUE(r.is_html_only("div"));
}

TEST(registry, self_check_rejects_bad_registries)
{
    const auto& b = TagRegistry::builtin();
    auto expect_registry_error = [](auto make) {
        try {
            make();
            ADD_FAILURE() << "registry accepted";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Registry);
        }
    };
    // Overlap between html and shared.
    expect_registry_error([&] {
        auto html = b.html_only();
        html.insert("p");
        TagRegistry(html, b.wml_only(), b.shared());
    });
    // 34 names on the WML side.
    expect_registry_error([&] {
        auto wml = b.wml_only();
        wml.erase("timer");
        TagRegistry(b.html_only(), wml, b.shared());
    });
    // Uppercase name.
    expect_registry_error([&] {
        auto html = b.html_only();
        html.insert("Foo");
        TagRegistry(html, b.wml_only(), b.shared());
    });
    // Shared `head` is readable as h + `ead`.
    expect_registry_error([&] {
        auto html = b.html_only();
        html.insert("ead");
        TagRegistry(html, b.wml_only(), b.shared());
    });
    // Unknown set name.
    expect_registry_error([] { TagRegistry::from_text("xml\tfoo\n"); });
}

TEST(classify, examples)
{
    const auto& r = TagRegistry::builtin();
    EXPECT_EQ(classify_tag("hdiv", r), (TagClass{Profile::HtmlOnly, "div"}));
    EXPECT_EQ(classify_tag("wcard", r), (TagClass{Profile::WmlOnly, "card"}));
    EXPECT_EQ(classify_tag("p", r), (TagClass{Profile::Shared, "p"}));
    EXPECT_EQ(classify_tag("HDIV", r), (TagClass{Profile::HtmlOnly, "div"}));
    EXPECT_EQ(classify_error_kind("WCARD"), ErrorKind::CaseViolation);
    EXPECT_EQ(classify_error_kind("wCard"), ErrorKind::CaseViolation);
}

TEST(classify, prefix_wins_then_shared_then_unknown)
{
    const auto& r = TagRegistry::builtin();
    // `head` is shared; h + `ead` is not a name, so it falls back.
    EXPECT_EQ(classify_tag("head", r), (TagClass{Profile::Shared, "head"}));
    // A prefix may also select a shared name.
    EXPECT_EQ(classify_tag("hp", r), (TagClass{Profile::HtmlOnly, "p"}));
    EXPECT_EQ(classify_tag("wp", r), (TagClass{Profile::WmlOnly, "p"}));
    EXPECT_EQ(classify_error_kind("hcard"), ErrorKind::UnknownTag);
    EXPECT_EQ(classify_error_kind("wdiv"), ErrorKind::UnknownTag);
    EXPECT_EQ(classify_error_kind("div"), ErrorKind::UnknownTag);
    EXPECT_EQ(classify_error_kind("blink"), ErrorKind::UnknownTag);
}

TEST(classify, html_side_case_insensitive_property)
{
    testsupport::Rng rng(7);
    const auto& r = TagRegistry::builtin();
    for (const auto& name : r.html_only()) {
        std::string raw = "h" + name;
        for (int trial = 0; trial < 8; ++trial) {
            std::string mixed = raw;
            for (auto& c : mixed) {
                if (rng() & 1) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            }
            EXPECT_EQ(classify_tag(mixed, r), classify_tag(raw, r)) << mixed;
        }
    }
}

TEST(classify, prefixed_name_round_trips)
{
    const auto& r = TagRegistry::builtin();
    for (const auto* set : {&r.html_only(), &r.wml_only(), &r.shared()}) {
        for (const auto& n : *set) {
            const auto tc = classify_tag(set == &r.shared() ? n : (set == &r.html_only() ? "h" : "w") + n, r);
            EXPECT_EQ(classify_tag(prefixed_name(tc), r), tc);
        }
    }
}

TEST(tokenizer, examples)
{
    auto t = tokenize("<p>hi</p>");
    EXPECT_EQ(kinds(t), (std::vector{TokenKind::StartTag, TokenKind::Text, TokenKind::EndTag}));
    EXPECT_EQ(t[0].name, "p");
    EXPECT_EQ(t[1].text, "hi");

    t = tokenize("<hbr/>");
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].kind, TokenKind::EmptyTag);
    EXPECT_EQ(t[0].name, "hbr");

    t = tokenize(R"(<a href="x&amp;y">)");
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].kind, TokenKind::StartTag);
    EXPECT_EQ(t[0].attributes, (std::vector<Attribute>{{"href", "x&y"}}));
}

TEST(tokenizer, quotes_and_references)
{
    const auto t = tokenize(R"(<p a='1"2' b="&lt;&gt;&quot;&apos;">&#65;&#x42;&amp;</p>)");
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0].attributes, (std::vector<Attribute>{{"a", "1\"2"}, {"b", "<>\"'"}}));
    EXPECT_EQ(t[1].text, "AB&");
}

TEST(tokenizer, whitespace_text_is_preserved)
{
    const auto t = tokenize("<p>  a \n</p>");
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[1].text, "  a \n");
}

TEST(tokenizer, comments_and_prolog_are_dropped)
{
    const auto t = tokenize("<?xml version=\"1.0\"?><!DOCTYPE x><!-- <p> --><p/>");
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].name, "p");
}

TEST(tokenizer, positions)
{
    const auto t = tokenize("<p>\n  <b>x</b></p>");
    ASSERT_EQ(t.size(), 6u);
    EXPECT_EQ(t[2].position.byte_offset, 6u);
    EXPECT_EQ(t[2].position.line, 2u);
    EXPECT_EQ(t[2].position.column, 3u);
    // Columns count code points, not bytes.
    const auto u = tokenize("\xC3\xA9<p/>");
    EXPECT_EQ(u[1].position.column, 2u);
    EXPECT_EQ(u[1].position.byte_offset, 2u);
}

TEST(tokenizer, syntax_errors)
{
    for (std::string_view bad : {"<p", "<p a=x>", "<p a=\"x>", "a < b", "<p>&bogus;</p>", "fish & chips",
                                 "<p a=\"1\"b=\"2\">", "<p a=\"1\" a=\"2\">", "<![CDATA[x]]>", "</p", "<>",
                                 "<!-- open", "\xC3\x28", "\xFF"}) {
        try {
            tokenize(bad);
            ADD_FAILURE() << "accepted: " << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::Syntax) << bad;
        }
    }
}

TEST(tokenizer, invalid_utf8_position)
{
    try {
        tokenize("<p>ab\xFF</p>");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.position().byte_offset, 5u);
    }
}

TEST(tokenizer, byte_offsets_strictly_increase)
{
    testsupport::Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const auto doc = testsupport::random_whtml(rng, TagRegistry::builtin(), 40);
        const auto tokens = tokenize(doc);
        for (std::size_t k = 1; k < tokens.size(); ++k)
            ASSERT_LT(tokens[k - 1].position.byte_offset, tokens[k].position.byte_offset);
        for (const auto& tok : tokens) {
            if (tok.kind == TokenKind::Text) ASSERT_FALSE(tok.text.empty());
        }
    }
}

TEST(wellformed, examples)
{
    EXPECT_FALSE(check_text("<p><b></b></p>"));

    auto v = check_text("<p><b></p></b>");
    ASSERT_TRUE(v);
    EXPECT_EQ(v->kind, ErrorKind::MismatchedEndTag);
    EXPECT_EQ(v->expected, "b");
    EXPECT_EQ(v->found, "p");
    EXPECT_EQ(v->token_index, 2u);
    EXPECT_EQ(v->position.byte_offset, 6u);
    EXPECT_EQ(v->expected_position.byte_offset, 3u);

    v = check_text("<p>");
    ASSERT_TRUE(v);
    EXPECT_EQ(v->kind, ErrorKind::UnclosedTags);
    ASSERT_EQ(v->open_tags.size(), 1u);
    EXPECT_EQ(v->open_tags[0].name, "p");
    EXPECT_EQ(v->token_index, 1u);

    v = check_text("</p>");
    ASSERT_TRUE(v);
    EXPECT_EQ(v->kind, ErrorKind::StrayEndTag);
    EXPECT_EQ(v->found, "p");
    EXPECT_EQ(v->token_index, 0u);
}

TEST(wellformed, empty_tags_and_case)
{
    EXPECT_FALSE(check_text("<P><hbr/></p>"));
    EXPECT_FALSE(check_text(""));
    EXPECT_FALSE(check_text("just text"));
    const auto v = check_text("<a><b><c>");
    ASSERT_TRUE(v);
    ASSERT_EQ(v->open_tags.size(), 3u);
    EXPECT_EQ(v->open_tags.front().name, "a");
    EXPECT_EQ(v->open_tags.back().name, "c");
}

TEST(wellformed, agrees_with_reference_matcher_on_token_streams)
{
    testsupport::Rng rng(2024);
    for (int i = 0; i < 2000; ++i) {
        const std::size_t len = std::uniform_int_distribution<std::size_t>(0, 300)(rng);
        const auto tokens = testsupport::random_token_stream(rng, len, 20);
        const auto got = check_well_formed(tokens);
        const auto want = testsupport::reference_match(tokens);
        ASSERT_EQ(!got.has_value(), want.well_formed) << "stream " << i;
        if (got) {
            ASSERT_EQ(got->kind, want.kind) << "stream " << i;
            ASSERT_EQ(got->token_index, want.token_index) << "stream " << i;
        }
    }
}

TEST(wellformed, agrees_with_reference_matcher_on_text)
{
    testsupport::Rng rng(99);
    for (int i = 0; i < 500; ++i) {
        const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 120)(rng);
        const auto text = testsupport::render_tokens(testsupport::random_token_stream(rng, len, 10));
        const auto tokens = tokenize(text);
        const auto got = check_well_formed(tokens);
        const auto want = testsupport::reference_match(tokens);
        ASSERT_EQ(!got.has_value(), want.well_formed) << text;
        if (got) {
            ASSERT_EQ(got->token_index, want.token_index) << text;
            const Position expected_pos =
                want.token_index < tokens.size() ? tokens[want.token_index].position : got->position;
            ASSERT_EQ(got->position, expected_pos) << text;
        }
    }
}

TEST(wellformed, to_error_message)
{
    const auto v = check_text("<whtml><p></whtml>");
    ASSERT_TRUE(v);
    const Error e = to_error(*v);
    EXPECT_EQ(e.kind(), ErrorKind::MismatchedEndTag);
    EXPECT_EQ(e.position().column, 11u);
    EXPECT_NE(std::string(e.what()).find("</whtml>"), std::string::npos);
}

TEST(document, parse_examples)
{
    auto doc = parse("<whtml><p>x</p></whtml>");
    EXPECT_EQ(doc.root().name, "whtml");
    EXPECT_TRUE(doc.root().is_root());
    ASSERT_EQ(doc.root().children.size(), 1u);
    const Element* p = doc.root().children[0].element();
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(p->tag_class(), (TagClass{Profile::Shared, "p"}));
    ASSERT_EQ(p->children.size(), 1u);
    EXPECT_EQ(p->children[0].text()->content, "x");

    doc = parse(R"(<whtml><hdiv><wcard id="c"/></hdiv></whtml>)");
    const Element* div = doc.root().children.at(0).element();
    ASSERT_NE(div, nullptr);
    EXPECT_EQ(div->tag_class(), (TagClass{Profile::HtmlOnly, "div"}));
    const Element* card = div->children.at(0).element();
    ASSERT_NE(card, nullptr);
    EXPECT_EQ(card->tag_class(), (TagClass{Profile::WmlOnly, "card"}));
    EXPECT_EQ(card->attributes, (std::vector<Attribute>{{"id", "c"}}));
}

TEST(document, bad_root)
{
    EXPECT_EQ(parse_error_kind("<p>x</p>"), ErrorKind::BadRoot);
    EXPECT_EQ(parse_error_kind(""), ErrorKind::BadRoot);
    EXPECT_EQ(parse_error_kind("<whtml/><whtml/>"), ErrorKind::BadRoot);
    EXPECT_EQ(parse_error_kind("text<whtml/>"), ErrorKind::BadRoot);
    EXPECT_NO_THROW(parse("  \n<whtml/>\n"));
    EXPECT_NO_THROW(parse("<!-- c --><WHTML></whtml>"));
}

TEST(document, error_kinds_surface)
{
    EXPECT_EQ(parse_error_kind("<whtml><p></whtml>"), ErrorKind::MismatchedEndTag);
    EXPECT_EQ(parse_error_kind("<whtml>"), ErrorKind::UnclosedTags);
    EXPECT_EQ(parse_error_kind("<whtml/></p>"), ErrorKind::StrayEndTag);
    EXPECT_EQ(parse_error_kind("<whtml><blink/></whtml>"), ErrorKind::UnknownTag);
    EXPECT_EQ(parse_error_kind("<whtml><WCARD/></whtml>"), ErrorKind::CaseViolation);
    EXPECT_EQ(parse_error_kind("<whtml><p</whtml>"), ErrorKind::Syntax);
}

TEST(document, unknown_tag_reports_its_position)
{
    try {
        parse("<whtml>\n  <blink/></whtml>");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::UnknownTag);
        EXPECT_EQ(e.position().line, 2u);
        EXPECT_EQ(e.position().column, 3u);
    }
}

TEST(document, digest_is_fnv1a_of_input)
{
    const std::string text = "<whtml><p>x</p></whtml>";
    EXPECT_EQ(parse(text).source_digest(), fnv1a64(text));
    EXPECT_NE(parse(text).source_digest(), parse(text + " ").source_digest());
}

TEST(document, names_lowercased_prefixes_restored)
{
    const auto doc = parse("<whtml><HDIV><P>a</p></hdiv></whtml>");
    EXPECT_EQ(serialize_whtml(doc), "<whtml><hdiv><p>a</p></hdiv></whtml>");
}

TEST(document, serialize_parse_fixed_point)
{
    testsupport::Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        const auto src = testsupport::random_whtml(rng, TagRegistry::builtin(), 60);
        const auto doc = parse(src);
        const auto again = parse(serialize_whtml(doc));
        ASSERT_EQ(doc, again) << src;
        ASSERT_EQ(serialize_whtml(doc), serialize_whtml(again));
    }
}

TEST(document, custom_registry)
{
    std::string text = "html\tblink\n";
    for (const auto& n : TagRegistry::builtin().shared()) text += "shared\t" + n + "\n";
    for (const auto& n : TagRegistry::builtin().wml_only()) text += "wml\t" + n + "\n";
    const auto reg = TagRegistry::from_text(text);
    EXPECT_NO_THROW(parse("<whtml><hblink/></whtml>", reg));
    EXPECT_THROW(parse("<whtml><hdiv/></whtml>", reg), Error);
}
