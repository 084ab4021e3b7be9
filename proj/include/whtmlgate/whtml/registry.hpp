#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

#include "whtmlgate/whtml/error.hpp"

namespace whtmlgate::whtml {

enum class Profile { HtmlOnly, WmlOnly, Shared };

std::string_view to_string(Profile profile) noexcept;

struct TagClass {
    Profile profile = Profile::Shared;
    std::string local_name;

    friend bool operator==(const TagClass&, const TagClass&) = default;
};

/// Number of names on the WML side (wml_only plus shared).
inline constexpr std::size_t kWmlVocabularySize = 35;

/// The wHTML tag vocabulary: three pairwise-disjoint name sets.
///
/// A tag written `h<name>` is HTML-only, `w<name>` is WML-only, and an
/// unprefixed name must be in the shared set. A registry is immutable once
/// built and every constructor runs the same self-check:
///   - names are non-empty lowercase ASCII ([a-z0-9]),
///   - the sets are pairwise disjoint,
///   - wml_only and shared together hold exactly 35 names,
///   - no shared name is also readable as a prefixed name (e.g. a shared
///     `head` forbids `ead` from the HTML side).
class TagRegistry {
public:
    using NameSet = std::set<std::string, std::less<>>;

    TagRegistry(NameSet html_only, NameSet wml_only, NameSet shared);

    /// Parses the line-oriented `<set>\t<name>` format.
    static TagRegistry from_text(std::string_view text);
    static TagRegistry load_file(const std::filesystem::path& path);

    /// The built-in vocabulary, identical to data/default.registry.
    static const TagRegistry& builtin();
    static std::string_view builtin_text() noexcept;

    /// Resolves an as-written tag name. Throws Error with UnknownTag or
    /// CaseViolation.
    TagClass classify(std::string_view raw_name) const;

    bool is_html_only(std::string_view name) const { return html_only_.contains(name); }
    bool is_wml_only(std::string_view name) const { return wml_only_.contains(name); }
    bool is_shared(std::string_view name) const { return shared_.contains(name); }

    const NameSet& html_only() const noexcept { return html_only_; }
    const NameSet& wml_only() const noexcept { return wml_only_; }
    const NameSet& shared() const noexcept { return shared_; }

private:
    void self_check() const;

    NameSet html_only_;
    NameSet wml_only_;
    NameSet shared_;
};

TagClass classify_tag(std::string_view raw_name, const TagRegistry& registry);

/// The as-written name that classifies back to `tag` (`h`/`w` prefix added).
std::string prefixed_name(const TagClass& tag);

}  // namespace whtmlgate::whtml
