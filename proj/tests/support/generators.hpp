#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "whtmlgate/media/media.hpp"
#include "whtmlgate/whtml/registry.hpp"
#include "whtmlgate/whtml/tokenizer.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

/// A random tag stream of exactly `length` tokens with nesting at most
/// `max_depth`. About a third of the streams are well-formed; the rest carry
/// a stray, mismatched or missing end tag somewhere. Names vary in case.
/// Positions are synthetic: byte_offset = index.
std::vector<whtmlgate::whtml::Token> random_token_stream(Rng& rng, std::size_t length, std::size_t max_depth);

/// Markup text for a token stream (escaping text content).
std::string render_tokens(const std::vector<whtmlgate::whtml::Token>& tokens);

/// A valid wHTML document over `registry` with roughly `target_nodes`
/// elements. The root always holds at least one `wcard`.
std::string random_whtml(Rng& rng, const whtmlgate::whtml::TagRegistry& registry, std::size_t target_nodes,
                         std::size_t max_depth = 12);

/// A random script in the WMLScript subset with a terminating `main`.
/// `arity` receives the number of parameters of `main`.
std::string random_script(Rng& rng, std::size_t& arity);

whtmlgate::media::Bitmap random_bitmap(Rng& rng, std::uint32_t max_w, std::uint32_t max_h);

std::vector<std::uint8_t> random_bytes(Rng& rng, std::size_t n);

}  // namespace testsupport
