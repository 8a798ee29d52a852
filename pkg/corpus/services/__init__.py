# Services: counting, infocontent
