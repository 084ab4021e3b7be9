#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "generators.hpp"
#include "whtmlgate/projector.hpp"
#include "whtmlgate/whtml/document.hpp"
#include "whtmlgate/whtml/wellformed.hpp"

using namespace whtmlgate;
using projector::Target;

namespace {

std::string project_text(std::string_view src, Target t) {
    return projector::serialize(projector::project(whtml::parse(src), t));
}

// Names of every tag in the markup, lowercased.
std::vector<std::string> tag_names(std::string_view markup) {
    std::vector<std::string> out;
    for (const auto& tok : whtml::tokenize(markup)) {
        if (tok.kind == whtml::TokenKind::Text) continue;
        std::string n = tok.name;
        for (auto& c : n) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.push_back(n);
    }
    return out;
}

void collect_shared(const whtml::Element& e, bool dropped_for_html, bool dropped_for_wml, std::size_t& in_html,
                    std::size_t& in_wml) {
    for (const auto& child : e.children) {
        const auto* el = child.element();
        if (!el) continue;
        const bool drop_h = dropped_for_html || el->profile == whtml::Profile::WmlOnly;
        const bool drop_w = dropped_for_wml || el->profile == whtml::Profile::HtmlOnly;
        if (el->profile == whtml::Profile::Shared) {
            if (!drop_h) ++in_html;
            if (!drop_w) ++in_wml;
        }
        collect_shared(*el, drop_h, drop_w, in_html, in_wml);
    }
}

std::size_t count_shared(const whtml::Element& e) {
    std::size_t n = 0;
    for (const auto& c : e.children) {
        if (const auto* el = c.element()) n += (el->profile == whtml::Profile::Shared) + count_shared(*el);
    }
    return n;
}

}  // namespace

TEST(projector, hello_projections)
{
    EXPECT_EQ(project_text(testsupport::kHelloDoc, Target::Html), testsupport::kHelloHtml);
    EXPECT_EQ(project_text(testsupport::kHelloDoc, Target::Wml), testsupport::kHelloWml);
}

TEST(projector, empty_documents)
{
    EXPECT_EQ(project_text("<whtml/>", Target::Html), "<html/>");
    EXPECT_THROW(project_text("<whtml/>", Target::Wml), projector::ProjectionError);
    EXPECT_THROW(project_text("<whtml><hdiv/></whtml>", Target::Wml), projector::ProjectionError);
    // A card nested below the root does not count toward the deck.
    EXPECT_THROW(project_text("<whtml><p><wcard/></p></whtml>", Target::Wml), projector::ProjectionError);
}

TEST(projector, subtree_of_other_profile_dropped)
{
    const auto src = "<whtml><hdiv><p>gone</p></hdiv><wcard><hspan>x</hspan><p>kept</p></wcard></whtml>";
    EXPECT_EQ(project_text(src, Target::Wml), "<wml><card><p>kept</p></card></wml>");
    EXPECT_EQ(project_text(src, Target::Html), "<html><div><p>gone</p></div></html>");
}

TEST(projector, whitespace_between_dropped_siblings_kept)
{
    EXPECT_EQ(project_text("<whtml>\n <hbr/>\n <wcard/>\n</whtml>", Target::Wml), "<wml>\n \n <card/>\n</wml>");
}

TEST(projector, escaping)
{
    EXPECT_EQ(project_text(R"(<whtml><p title="a&quot;b"/></whtml>)", Target::Html), R"(<html><p title="a&quot;b"/></html>)");
    EXPECT_EQ(project_text("<whtml><p>1 &lt; 2</p></whtml>", Target::Html), "<html><p>1 &lt; 2</p></html>");
    EXPECT_EQ(project_text(R"(<whtml><p a="&amp;&lt;&gt;'">"&amp;&gt;</p></whtml>)", Target::Html),
              R"(<html><p a="&amp;&lt;&gt;'">"&amp;&gt;</p></html>)");
}

TEST(projector, content_types)
{
    EXPECT_EQ(projector::content_type(Target::Html), "text/html");
    EXPECT_EQ(projector::content_type(Target::Wml), "text/vnd.wap.wml");
}

TEST(projector, names_lowercased)
{
    EXPECT_EQ(project_text("<WHTML><HBODY><B>x</B></HBODY></WHTML>", Target::Html),
              "<html><body><b>x</b></body></html>");
}

TEST(projector, purity_property)
{
    testsupport::Rng rng(31);
    const auto& reg = whtml::TagRegistry::builtin();
    for (int i = 0; i < 300; ++i) {
        const auto src = testsupport::random_whtml(rng, reg, 50);
        const auto doc = whtml::parse(src);
        const auto html = projector::serialize(projector::project(doc, Target::Html));
        const auto wml = projector::serialize(projector::project(doc, Target::Wml));
        const auto html_names = tag_names(html);
        const auto wml_names = tag_names(wml);
        ASSERT_EQ(html_names.front(), "html");
        ASSERT_EQ(wml_names.front(), "wml");
        for (std::size_t k = 1; k < html_names.size(); ++k)
            ASSERT_FALSE(reg.is_wml_only(html_names[k])) << html_names[k] << " in " << html;
        for (std::size_t k = 1; k < wml_names.size(); ++k)
            ASSERT_FALSE(reg.is_html_only(wml_names[k])) << wml_names[k] << " in " << wml;
        ASSERT_FALSE(whtml::check_well_formed(whtml::tokenize(html)));
        ASSERT_FALSE(whtml::check_well_formed(whtml::tokenize(wml)));
    }
}

TEST(projector, shared_preservation_property)
{
    testsupport::Rng rng(32);
    for (int i = 0; i < 200; ++i) {
        const auto doc = whtml::parse(testsupport::random_whtml(rng, whtml::TagRegistry::builtin(), 40));
        std::size_t want_html = 0, want_wml = 0;
        collect_shared(doc.root(), false, false, want_html, want_wml);
        EXPECT_EQ(count_shared(projector::project(doc, Target::Html).root), want_html);
        EXPECT_EQ(count_shared(projector::project(doc, Target::Wml).root), want_wml);
    }
}

TEST(projector, idempotent_after_rewrap)
{
    testsupport::Rng rng(33);
    for (int i = 0; i < 200; ++i) {
        const auto doc = whtml::parse(testsupport::random_whtml(rng, whtml::TagRegistry::builtin(), 40));
        for (Target t : {Target::Html, Target::Wml}) {
            const auto once = projector::project(doc, t);
            // Re-wrap under a whtml root with prefixes restored.
            whtml::Element rewrapped = once.root;
            rewrapped.name = "whtml";
            std::string src;
            whtml::write_markup(src, rewrapped, true);
            const auto twice = projector::project(whtml::parse(src), t);
            ASSERT_EQ(projector::serialize(once), projector::serialize(twice)) << src;
        }
    }
}

TEST(projector, deterministic)
{
    testsupport::Rng rng(34);
    for (int i = 0; i < 50; ++i) {
        const auto src = testsupport::random_whtml(rng, whtml::TagRegistry::builtin(), 30);
        EXPECT_EQ(project_text(src, Target::Wml), project_text(src, Target::Wml));
        EXPECT_EQ(projector::project(whtml::parse(src), Target::Html),
                  projector::project(whtml::parse(src), Target::Html));
    }
}
