#pragma once
#include <mutex>

namespace disperse1d {

//! FFTW's planner is not reentrant; every plan create/destroy takes this lock.
std::mutex &planner_mutex();

} // namespace disperse1d
