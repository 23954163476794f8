#ifndef POLYSMITH_VARSET_HPP
#define POLYSMITH_VARSET_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "polysmith/errors.hpp"

namespace polysmith {

// Ordered set of variable names. The first variable plays the role of the
// distinguished univariate one (the modulus p lives in it); the order is
// fixed for the lifetime of a session and shared across all values.
class VarSet {
  public:
    static std::shared_ptr<const VarSet> make(std::vector<std::string> names) {
        if (names.empty()) throw Error("variable set must be nonempty");
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i].empty()) throw Error("empty variable name");
            for (std::size_t j = i + 1; j < names.size(); ++j)
                if (names[i] == names[j])
                    throw Error("duplicate variable name '" + names[i] + "'");
        }
        return std::shared_ptr<const VarSet>(new VarSet(std::move(names)));
    }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_[i]; }
    const std::vector<std::string>& names() const { return names_; }

    std::optional<std::size_t> index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return i;
        return std::nullopt;
    }

    bool operator==(const VarSet& o) const { return names_ == o.names_; }

  private:
    explicit VarSet(std::vector<std::string> names) : names_(std::move(names)) {}
    std::vector<std::string> names_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

inline bool same_vars(const VarSetPtr& a, const VarSetPtr& b) {
    return a == b || (a && b && *a == *b);
}

}  // namespace polysmith

#endif
