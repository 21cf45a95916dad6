#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "evacsim/model.hpp"

namespace evacsim {

using PuId = std::uint32_t;
using SuId = std::uint32_t;
using Channel = int;  // 1..n_channels; secondary users may be off-air (nullopt)

// Relational interference database of one spectrum manager: which secondary
// users sit inside each primary user's guard zone, and who occupies which
// channel. Membership is pure disk geometry under the torus metric; lookups
// go through a bucket grid with cell size r_p so queries touch only the
// 3x3 neighborhood.
//
// The symmetric relation (SU in PU's guard set <=> PU in SU's interferer
// set <=> distance <= r_p) is maintained across adds and removals.
class InterferenceDb {
public:
    struct PuRecord {
        Point2D pos;
        std::optional<Channel> watched;     // channel currently watched, if any
        std::vector<SuId> guard_sus;        // sorted
    };
    struct SuRecord {
        Point2D pos;
        std::optional<Channel> operating;   // nullopt = off-air / blocked
        std::vector<PuId> interfered_pus;   // sorted
    };

    InterferenceDb(const SpatialParams& spatial, int n_channels);

    void add_pu(PuId id, Point2D pos, std::optional<Channel> watched);
    void add_su(SuId id, Point2D pos, std::optional<Channel> operating);
    void remove_pu(PuId id);
    void remove_su(SuId id);
    void set_pu_watched(PuId id, std::optional<Channel> channel);
    void retune_su(SuId id, std::optional<Channel> channel);

    /// Secondary users in `pu`'s guard zone currently operating on `b`.
    std::vector<SuId> affected_sus(PuId pu, Channel b) const;

    /// Channels not watched by any primary user whose guard zone contains
    /// this secondary user.
    std::vector<Channel> free_channels_for(SuId su) const;

    const PuRecord& pu(PuId id) const;
    const SuRecord& su(SuId id) const;
    bool has_pu(PuId id) const { return pus_.count(id) != 0; }
    bool has_su(SuId id) const { return sus_.count(id) != 0; }
    std::size_t pu_count() const { return pus_.size(); }
    std::size_t su_count() const { return sus_.size(); }
    int n_channels() const { return n_channels_; }
    const std::unordered_map<PuId, PuRecord>& pus() const { return pus_; }
    const std::unordered_map<SuId, SuRecord>& sus() const { return sus_; }

private:
    struct Bucket {
        std::vector<PuId> pus;
        std::vector<SuId> sus;
    };

    std::size_t bucket_index(const Point2D& p) const;
    // invokes fn(bucket) for the 3x3 torus neighborhood, each bucket once
    template <typename Fn>
    void for_neighborhood(const Point2D& p, Fn&& fn) const;
    void check_in_region(const Point2D& p) const;

    SpatialParams spatial_;
    int n_channels_;
    std::size_t cols_, rows_;
    std::vector<Bucket> buckets_;
    std::unordered_map<PuId, PuRecord> pus_;
    std::unordered_map<SuId, SuRecord> sus_;
};

struct PuPlacement {
    PuId id;
    Point2D pos;
    std::optional<Channel> watched;
};
struct SuPlacement {
    SuId id;
    Point2D pos;
    std::optional<Channel> operating;
};

/// Bulk construction from placements; rejects duplicate ids and
/// out-of-region coordinates.
InterferenceDb build_interference_db(const std::vector<PuPlacement>& pus,
                                     const std::vector<SuPlacement>& sus,
                                     const SpatialParams& spatial,
                                     int n_channels);

}  // namespace evacsim
