# AffineLinkage - exact Kac-Kazhdan linkage toolkit
