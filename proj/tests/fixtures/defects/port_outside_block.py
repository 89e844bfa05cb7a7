# @in stray
# @begin wf
# @in a
# @out b
a = 1
# @begin step
# @in a
# @out b
b = a + 1
# @end step
# @end wf
