#include "whtmlgate/whtml/registry.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace whtmlgate::whtml {

// Generated from data/default.registry at configure time.
extern const std::string_view kBuiltinRegistryText;

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Syntax: return "SyntaxError";
        case ErrorKind::UnknownTag: return "UnknownTag";
        case ErrorKind::CaseViolation: return "CaseViolation";
        case ErrorKind::MismatchedEndTag: return "MismatchedEndTag";
        case ErrorKind::UnclosedTags: return "UnclosedTags";
        case ErrorKind::StrayEndTag: return "StrayEndTag";
        case ErrorKind::BadRoot: return "BadRoot";
        case ErrorKind::Registry: return "RegistryError";
    }
    return "Error";
}

std::string_view to_string(Profile profile) noexcept {
    switch (profile) {
        case Profile::HtmlOnly: return "html";
        case Profile::WmlOnly: return "wml";
        case Profile::Shared: return "shared";
    }
    return "?";
}

namespace {

bool is_lower_ascii_name(std::string_view name) {
    return !name.empty() && std::all_of(name.begin(), name.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
    });
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

[[noreturn]] void registry_error(const std::string& msg) {
    throw Error(ErrorKind::Registry, Position{}, msg);
}

}  // namespace

TagRegistry::TagRegistry(NameSet html_only, NameSet wml_only, NameSet shared)
    : html_only_(std::move(html_only)), wml_only_(std::move(wml_only)), shared_(std::move(shared)) {
    self_check();
}

void TagRegistry::self_check() const {
    for (const NameSet* set : {&html_only_, &wml_only_, &shared_}) {
        for (const auto& name : *set) {
            if (!is_lower_ascii_name(name)) registry_error("invalid tag name '" + name + "'");
        }
    }
    for (const auto& name : html_only_) {
        if (wml_only_.contains(name) || shared_.contains(name))
            registry_error("tag '" + name + "' is in more than one set");
    }
    for (const auto& name : wml_only_) {
        if (shared_.contains(name)) registry_error("tag '" + name + "' is in more than one set");
    }
    if (wml_only_.size() + shared_.size() != kWmlVocabularySize) {
        registry_error("wml and shared sets hold " + std::to_string(wml_only_.size() + shared_.size()) +
                       " names, expected " + std::to_string(kWmlVocabularySize));
    }
    // A shared name must not also read as a prefixed name.
    for (const auto& name : shared_) {
        if (name.size() < 2) continue;
        std::string_view rest = std::string_view(name).substr(1);
        if (name[0] == 'h' && (html_only_.contains(rest) || shared_.contains(rest)))
            registry_error("shared tag '" + name + "' collides with h-prefixed '" + std::string(rest) + "'");
        if (name[0] == 'w' && (wml_only_.contains(rest) || shared_.contains(rest)))
            registry_error("shared tag '" + name + "' collides with w-prefixed '" + std::string(rest) + "'");
    }
}

TagRegistry TagRegistry::from_text(std::string_view text) {
    NameSet html, wml, shared;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        auto tab = line.find('\t');
        if (tab == std::string_view::npos)
            registry_error("line " + std::to_string(line_no) + ": expected <set>\\t<name>");
        std::string_view set = line.substr(0, tab);
        std::string name(line.substr(tab + 1));
        if (!is_lower_ascii_name(name))
            registry_error("line " + std::to_string(line_no) + ": invalid tag name '" + name + "'");

        NameSet* target = nullptr;
        if (set == "html") target = &html;
        else if (set == "wml") target = &wml;
        else if (set == "shared") target = &shared;
        else registry_error("line " + std::to_string(line_no) + ": unknown set '" + std::string(set) + "'");
        if (!target->insert(name).second)
            registry_error("line " + std::to_string(line_no) + ": duplicate tag '" + name + "'");
    }
    return TagRegistry(std::move(html), std::move(wml), std::move(shared));
}

TagRegistry TagRegistry::load_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) registry_error("cannot read registry file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

std::string_view TagRegistry::builtin_text() noexcept { return kBuiltinRegistryText; }

const TagRegistry& TagRegistry::builtin() {
    static const TagRegistry registry = from_text(kBuiltinRegistryText);
    return registry;
}

TagClass TagRegistry::classify(std::string_view raw_name) const {
    if (raw_name.empty()) throw Error(ErrorKind::UnknownTag, Position{}, "empty tag name");
    const std::string lower = ascii_lower(raw_name);
    std::string_view rest = std::string_view(lower).substr(1);

    if (lower[0] == 'h' && (html_only_.contains(rest) || shared_.contains(rest)))
        return TagClass{Profile::HtmlOnly, std::string(rest)};
    if (lower[0] == 'w' && (wml_only_.contains(rest) || shared_.contains(rest))) {
        if (lower != raw_name)
            throw Error(ErrorKind::CaseViolation, Position{},
                        "WML tag '" + std::string(raw_name) + "' must be lowercase");
        return TagClass{Profile::WmlOnly, std::string(rest)};
    }
    if (shared_.contains(lower)) return TagClass{Profile::Shared, lower};
    throw Error(ErrorKind::UnknownTag, Position{}, "unknown tag '" + std::string(raw_name) + "'");
}

TagClass classify_tag(std::string_view raw_name, const TagRegistry& registry) {
    return registry.classify(raw_name);
}

std::string prefixed_name(const TagClass& tag) {
    switch (tag.profile) {
        case Profile::HtmlOnly: return "h" + tag.local_name;
        case Profile::WmlOnly: return "w" + tag.local_name;
        case Profile::Shared: break;
    }
    return tag.local_name;
}

}  // namespace whtmlgate::whtml
