#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "whtmlgate/whtml/registry.hpp"
#include "whtmlgate/whtml/tokenizer.hpp"

namespace whtmlgate::whtml {

inline constexpr std::string_view kRootName = "whtml";

struct Node;

/// An element of a parsed or projected tree. `name` is the lowercase local
/// name (prefix stripped). Root elements carry no profile.
struct Element {
    std::string name;
    std::optional<Profile> profile;
    std::vector<Attribute> attributes;
    std::vector<Node> children;

    bool is_root() const noexcept { return !profile.has_value(); }
    TagClass tag_class() const { return TagClass{profile.value_or(Profile::Shared), name}; }

    friend bool operator==(const Element&, const Element&) = default;
};

struct Text {
    std::string content;

    friend bool operator==(const Text&, const Text&) = default;
};

struct Node {
    std::variant<Element, Text> value;

    const Element* element() const noexcept { return std::get_if<Element>(&value); }
    const Text* text() const noexcept { return std::get_if<Text>(&value); }

    friend bool operator==(const Node&, const Node&) = default;
};

/// A validated wHTML document. Only parse() produces one, so holding a
/// WhtmlDocument means the source was well-formed and fully classified.
class WhtmlDocument {
public:
    const Element& root() const noexcept { return root_; }
    std::uint64_t source_digest() const noexcept { return digest_; }

    friend bool operator==(const WhtmlDocument& a, const WhtmlDocument& b) { return a.root_ == b.root_; }

private:
    friend WhtmlDocument parse(std::string_view input, const TagRegistry& registry);
    WhtmlDocument(Element root, std::uint64_t digest) : root_(std::move(root)), digest_(digest) {}

    Element root_;
    std::uint64_t digest_ = 0;
};

/// tokenize, check_well_formed, classify every tag and require a single
/// unprefixed `whtml` root. Throws Error.
WhtmlDocument parse(std::string_view input, const TagRegistry& registry = TagRegistry::builtin());

/// Canonical markup for a tree: lowercase names, double-quoted attributes,
/// childless elements as `<name/>`. With `with_prefixes` the `h`/`w`
/// prefixes are written back, otherwise local names are used.
void write_markup(std::string& out, const Element& element, bool with_prefixes);

/// Writes the document back as wHTML source with `h`/`w` prefixes restored.
std::string serialize_whtml(const WhtmlDocument& doc);

}  // namespace whtmlgate::whtml
