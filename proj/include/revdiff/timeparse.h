#ifndef REVDIFF_TIMEPARSE_H_
#define REVDIFF_TIMEPARSE_H_

#include <optional>
#include <string_view>

namespace revdiff {

// Seconds since the Unix epoch for an RFC 3339 timestamp such as
// "2021-01-05T10:00:00Z" or "2021-01-05 10:00:00.25+01:00". A missing offset
// is read as UTC. nullopt on malformed input.
std::optional<double> parse_rfc3339(std::string_view s);

}  // namespace revdiff

#endif  // REVDIFF_TIMEPARSE_H_
